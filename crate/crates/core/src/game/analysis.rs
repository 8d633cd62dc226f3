use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;

/// Dominance sets of a payoff matrix, as row and column indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub strict: bool,
    /// Rows that dominate every other row.
    pub dominant_rows: Vec<usize>,
    /// Rows dominated by at least one other row.
    pub dominated_rows: Vec<usize>,
    pub dominant_cols: Vec<usize>,
    pub dominated_cols: Vec<usize>,
}

fn check_rect(values: &[Vec<f64>]) -> Result<(usize, usize)> {
    let rows = values.len();
    let cols = values.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || values.iter().any(|r| r.len() != cols) {
        return Err(Error::MalformedMatrix("matrix must be non-empty and rectangular".into()));
    }
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::MalformedMatrix("matrix contains non-finite values".into()));
    }
    Ok((rows, cols))
}

fn better(a: f64, b: f64, strict: bool) -> bool {
    if strict {
        a > b
    } else {
        a >= b
    }
}

/// `a` dominates `b` when it is at least as good against every opponent
/// choice (strictly better everywhere with `strict`).
fn dominates(a: &[f64], b: &[f64], strict: bool) -> bool {
    a.iter().zip(b).all(|(&x, &y)| better(x, y, strict))
}

fn side(payoff_by_choice: &[Vec<f64>], strict: bool) -> (Vec<usize>, Vec<usize>) {
    let n = payoff_by_choice.len();
    let cols = payoff_by_choice[0].len();
    // A choice dominates every other one iff it attains the best payoff
    // against each opponent choice (and, for strict, uniquely).
    let dominant = (0..n)
        .filter(|&r| {
            (0..cols).all(|c| {
                let v = payoff_by_choice[r][c];
                (0..n).all(|o| o == r || better(v, payoff_by_choice[o][c], strict))
            })
        })
        .collect();
    let dominated = (0..n)
        .filter(|&r| (0..n).any(|o| o != r && dominates(&payoff_by_choice[o], &payoff_by_choice[r], strict)))
        .collect();
    (dominant, dominated)
}

/// Dominance analysis of Blue utilities. Columns are judged on Red's payoff,
/// the negated matrix.
pub fn dominance(values: &[Vec<f64>], strict: bool) -> Result<DominanceReport> {
    let (rows, cols) = check_rect(values)?;
    let (dominant_rows, dominated_rows) = side(values, strict);
    let red: Vec<Vec<f64>> = (0..cols).map(|c| (0..rows).map(|r| -values[r][c]).collect()).collect();
    let (dominant_cols, dominated_cols) = side(&red, strict);
    Ok(DominanceReport {
        strict,
        dominant_rows,
        dominated_rows,
        dominant_cols,
        dominated_cols,
    })
}

pub fn dominance_analysis(matrix: &PayoffMatrix, strict: bool) -> Result<DominanceReport> {
    dominance(&matrix.values()?, strict)
}

/// Optimal mixed strategies of the zero-sum game with Blue maximising.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximinSolution {
    pub blue: Vec<f64>,
    pub red: Vec<f64>,
    pub value: f64,
    /// Worst-case Blue utility of `blue` over Red's pure strategies.
    pub blue_guarantee: f64,
    /// Best-case Blue utility against `red` over Blue's pure strategies.
    pub red_guarantee: f64,
    /// Best pure-strategy security level for Blue and the row attaining it.
    pub pure_maximin_row: usize,
    pub pure_maximin_value: f64,
}

/// Solves the matrix game exactly by the simplex method.
///
/// The matrix is shifted and scaled to be strictly positive. Red's problem is
/// then `max sum(y)` subject to `B y <= 1, y >= 0` and plays `y / sum(y)`;
/// Blue's strategy is read from the dual.
pub fn solve_zero_sum(values: &[Vec<f64>]) -> Result<MaximinSolution> {
    let (m, n) = check_rect(values)?;
    let lo = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = (hi - lo).max(1.0);
    let shift = lo - scale;
    // Columns: y_0..y_{n-1}, slack_0..slack_{m-1}, rhs.
    let width = n + m + 1;
    let mut tab = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        for j in 0..n {
            tab[i][j] = (values[i][j] - shift) / scale;
        }
        tab[i][n + i] = 1.0;
        tab[i][width - 1] = 1.0;
    }
    for j in 0..n {
        tab[m][j] = -1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = 1e-12;
    loop {
        // Bland's rule: lowest-index improving column, lowest-index basic
        // variable among ratio ties.
        let Some(enter) = (0..n + m).find(|&j| tab[m][j] < -eps) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i][enter];
            if a > eps {
                let ratio = tab[i][width - 1] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - eps || (ratio <= best + eps && basis[i] < basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
        }
        let (row, _) = leave.ok_or_else(|| Error::MalformedMatrix("unbounded game program".into()))?;
        let pivot = tab[row][enter];
        for v in tab[row].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = tab[row].clone();
        for (i, r) in tab.iter_mut().enumerate() {
            if i != row {
                let factor = r[enter];
                if factor != 0.0 {
                    for (v, p) in r.iter_mut().zip(&pivot_row) {
                        *v -= factor * p;
                    }
                }
            }
        }
        basis[row] = enter;
    }
    let mut y = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = tab[i][width - 1].max(0.0);
        }
    }
    let x: Vec<f64> = (0..m).map(|i| tab[m][n + i].max(0.0)).collect();
    let red = normalize(y);
    let blue = normalize(x);

    let blue_guarantee = (0..n)
        .map(|j| (0..m).map(|i| blue[i] * values[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let red_guarantee = (0..m)
        .map(|i| (0..n).map(|j| values[i][j] * red[j]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let (pure_maximin_row, pure_maximin_value) = (0..m)
        .map(|i| (i, values[i].iter().copied().fold(f64::INFINITY, f64::min)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(MaximinSolution {
        blue,
        red,
        value: 0.5 * (blue_guarantee + red_guarantee),
        blue_guarantee,
        red_guarantee,
        pure_maximin_row,
        pure_maximin_value,
    })
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    for p in &mut v {
        *p /= s;
    }
    v
}

pub fn maximin_solve(matrix: &PayoffMatrix) -> Result<MaximinSolution> {
    solve_zero_sum(&matrix.values()?)
}
