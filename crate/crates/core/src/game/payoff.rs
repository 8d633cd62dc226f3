use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{FrustrationAssignment, SimState};
use crate::error::{Error, Result};
use crate::game::{utilities, ActionSet, GameConfig, GameInstance, Strategy, TurnScore};

/// One seed's outcome for a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSample {
    pub seed: u64,
    pub turns: Vec<TurnScore>,
    pub utility_blue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub row: usize,
    pub col: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffCell {
    /// Mean Blue utility over seeds; `None` when any seed failed.
    pub mean_utility_blue: Option<f64>,
    pub seed_count: usize,
    pub samples: Vec<CellSample>,
    pub failures: Vec<CellFailure>,
}

impl PayoffCell {
    fn from_value(value: Option<f64>, seed_count: usize) -> Self {
        PayoffCell {
            mean_utility_blue: value,
            seed_count,
            samples: Vec::new(),
            failures: Vec::new(),
        }
    }
}

/// Blue utility for every (Blue strategy, Red strategy) pair. Red's payoff
/// is the negation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix {
    pub blue_strategies: Vec<Strategy>,
    pub red_strategies: Vec<Strategy>,
    /// Row-major cells.
    pub cells: Vec<PayoffCell>,
}

impl PayoffMatrix {
    /// A complete matrix from plain values, one seed per cell.
    pub fn from_values(blue: Vec<Strategy>, red: Vec<Strategy>, values: &[Vec<f64>]) -> Result<Self> {
        if values.len() != blue.len() || values.iter().any(|r| r.len() != red.len()) {
            return Err(Error::MalformedMatrix(format!(
                "values are not {} x {}",
                blue.len(),
                red.len()
            )));
        }
        let cells = values
            .iter()
            .flatten()
            .map(|&v| PayoffCell::from_value(Some(v), 1))
            .collect();
        Ok(PayoffMatrix {
            blue_strategies: blue,
            red_strategies: red,
            cells,
        })
    }

    /// Matrix with placeholder single-turn strategies labelled by index, for
    /// analysing arbitrary numeric games.
    pub fn from_numbers(values: &[Vec<f64>]) -> Result<Self> {
        let rows = values.len();
        let cols = values.first().map_or(0, Vec::len);
        let label = |n: usize| -> Vec<Strategy> {
            (0..n)
                .map(|k| Strategy::new(vec![std::f64::consts::PI * k as f64 / n.max(1) as f64]).unwrap())
                .collect()
        };
        PayoffMatrix::from_values(label(rows), label(cols), values)
    }

    pub fn rows(&self) -> usize {
        self.blue_strategies.len()
    }

    pub fn cols(&self) -> usize {
        self.red_strategies.len()
    }

    pub fn cell(&self, row: usize, col: usize) -> &PayoffCell {
        &self.cells[row * self.cols() + col]
    }

    pub fn value(&self, row: usize, col: usize) -> Option<f64> {
        self.cell(row, col).mean_utility_blue
    }

    pub fn invalid_count(&self) -> usize {
        self.cells.iter().filter(|c| c.mean_utility_blue.is_none()).count()
    }

    pub fn failures(&self) -> Vec<CellFailure> {
        self.cells.iter().flat_map(|c| c.failures.iter().cloned()).collect()
    }

    /// Dense Blue utilities; refuses matrices with invalid cells.
    pub fn values(&self) -> Result<Vec<Vec<f64>>> {
        let invalid = self.invalid_count();
        if invalid > 0 {
            return Err(Error::InvalidCells(invalid));
        }
        Ok((0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.value(r, c).unwrap()).collect())
            .collect())
    }

    /// CSV: `row,col,blue_strategy,red_strategy,mean_utility_blue,seed_count`.
    /// Invalid cells leave the utility empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "col", "blue_strategy", "red_strategy", "mean_utility_blue", "seed_count"])?;
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let cell = self.cell(r, c);
                w.write_record([
                    r.to_string(),
                    c.to_string(),
                    self.blue_strategies[r].label(),
                    self.red_strategies[c].label(),
                    cell.mean_utility_blue.map(|v| v.to_string()).unwrap_or_default(),
                    cell.seed_count.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io("payoff matrix", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            row: usize,
            col: usize,
            blue_strategy: String,
            red_strategy: String,
            mean_utility_blue: Option<f64>,
            seed_count: usize,
        }
        let mut rdr = csv::Reader::from_reader(input);
        let mut entries = Vec::new();
        for rec in rdr.deserialize() {
            let row: Row = rec?;
            entries.push(row);
        }
        let rows = entries.iter().map(|e| e.row + 1).max().unwrap_or(0);
        let cols = entries.iter().map(|e| e.col + 1).max().unwrap_or(0);
        if rows * cols == 0 || entries.len() != rows * cols {
            return Err(Error::MalformedMatrix(format!(
                "{} entries do not fill a {rows} x {cols} matrix",
                entries.len()
            )));
        }
        let mut blue: Vec<Option<Strategy>> = vec![None; rows];
        let mut red: Vec<Option<Strategy>> = vec![None; cols];
        let mut cells: Vec<Option<PayoffCell>> = vec![None; rows * cols];
        for e in entries {
            let b = Strategy::parse_label(&e.blue_strategy)?;
            let r = Strategy::parse_label(&e.red_strategy)?;
            for (slot, s, what) in [(&mut blue[e.row], b, "row"), (&mut red[e.col], r, "column")] {
                match slot {
                    Some(prev) if *prev != s => {
                        return Err(Error::MalformedMatrix(format!("inconsistent strategy labels for a {what}")))
                    }
                    _ => *slot = Some(s),
                }
            }
            let idx = e.row * cols + e.col;
            if cells[idx].is_some() {
                return Err(Error::MalformedMatrix(format!("duplicate cell ({}, {})", e.row, e.col)));
            }
            cells[idx] = Some(PayoffCell::from_value(e.mean_utility_blue, e.seed_count));
        }
        Ok(PayoffMatrix {
            blue_strategies: blue.into_iter().map(Option::unwrap).collect(),
            red_strategies: red.into_iter().map(Option::unwrap).collect(),
            cells: cells.into_iter().map(Option::unwrap).collect(),
        })
    }
}

/// A partially played game: both players' action indices so far, the state at
/// the end of the last played turn and the per-turn scores.
#[derive(Debug, Clone)]
struct Prefix {
    blue: usize,
    red: usize,
    state: Option<SimState>,
    turns: Vec<TurnScore>,
    error: Option<String>,
}

/// Plays every strategy pair of `actions^K x actions^K` for every seed and
/// averages Blue utility over seeds.
///
/// Turns are played as a tree: all cells sharing the same first `k` actions of
/// both players share the first `k` integrated turns. Every cell is still the
/// exact result of playing its strategy pair from the seed's initial state.
pub fn enumerate_payoffs(config: &GameConfig, actions: &ActionSet, seeds: &[u64]) -> Result<PayoffMatrix> {
    if seeds.is_empty() {
        return Err(Error::NoSeeds);
    }
    if actions.is_empty() {
        return Err(Error::param("game.actions", "action set is empty"));
    }
    config.validate()?;
    let k = config.turns;
    let strategies = actions.strategies(k);
    let n = strategies.len();
    let mut cells: Vec<PayoffCell> = (0..n * n)
        .map(|_| PayoffCell {
            mean_utility_blue: None,
            seed_count: seeds.len(),
            samples: Vec::with_capacity(seeds.len()),
            failures: Vec::new(),
        })
        .collect();

    let a = actions.len();
    for &seed in seeds {
        let instance = GameInstance::new(&config.with_seed(seed))?;
        let model = instance.model()?;
        let mut level = vec![Prefix {
            blue: 0,
            red: 0,
            state: Some(instance.initial_state().clone()),
            turns: Vec::new(),
            error: None,
        }];
        for turn in 0..k {
            let keep_state = turn + 1 < k;
            let jobs: Vec<(usize, usize, usize)> = (0..level.len())
                .flat_map(|p| (0..a).flat_map(move |ab| (0..a).map(move |ar| (p, ab, ar))))
                .collect();
            level = jobs
                .par_iter()
                .map(|&(p, ab, ar)| {
                    let parent = &level[p];
                    let mut child = Prefix {
                        blue: parent.blue * a + ab,
                        red: parent.red * a + ar,
                        state: None,
                        turns: parent.turns.clone(),
                        error: parent.error.clone(),
                    };
                    if let Some(start) = &parent.state {
                        let f = FrustrationAssignment::new(actions.values()[ab], actions.values()[ar]);
                        match instance.play_turn(&model, start, turn, f, false) {
                            Ok(out) => {
                                child.turns.push(out.score);
                                if keep_state {
                                    child.state = Some(out.end);
                                }
                            }
                            Err(e) => child.error = Some(e.to_string()),
                        }
                    }
                    child
                })
                .collect();
        }
        for leaf in level {
            let idx = leaf.blue * n + leaf.red;
            let cell = &mut cells[idx];
            match leaf.error {
                None => {
                    let (utility_blue, _) = utilities(&leaf.turns);
                    cell.samples.push(CellSample {
                        seed,
                        turns: leaf.turns,
                        utility_blue,
                    });
                }
                Some(message) => cell.failures.push(CellFailure {
                    row: leaf.blue,
                    col: leaf.red,
                    seed,
                    message,
                }),
            }
        }
    }
    for cell in &mut cells {
        if cell.failures.is_empty() {
            let sum: f64 = cell.samples.iter().map(|s| s.utility_blue).sum();
            cell.mean_utility_blue = Some(sum / cell.samples.len() as f64);
        }
    }
    Ok(PayoffMatrix {
        blue_strategies: strategies.clone(),
        red_strategies: strategies,
        cells,
    })
}
