//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the model kernels; only network accessors and
//! parameter values are read.

#![allow(dead_code)]

use c2game::dynamics::{FrustrationAssignment, ModelParams, SimState};
use c2game::network::{C2Network, Echelon, LinkClass, Population};

fn mean_field(phases: &[f64], ids: &[usize]) -> f64 {
    if ids.is_empty() {
        return 0.0;
    }
    let re: f64 = ids.iter().map(|&k| phases[k].cos()).sum();
    let im: f64 = ids.iter().map(|&k| phases[k].sin()).sum();
    (re * re + im * im).sqrt() / ids.len() as f64
}

fn hard_outside(params: &ModelParams, p: [f64; 2]) -> bool {
    (p[0] * p[0] + p[1] * p[1]).sqrt() > params.hill_radius
}

/// Phase velocities straight from the coupled-oscillator sum, one edge at a
/// time, with exact distances for attenuation.
pub fn phase_rhs(net: &C2Network, params: &ModelParams, s: &SimState, f: FrustrationAssignment) -> Vec<f64> {
    let agents = net.agents();
    let nu = params.frequency_ratio;
    let e = &params.degree_exponents;
    let mut out = Vec::with_capacity(agents.len());
    for a in agents {
        let i = a.id;
        let mut v = a.omega;
        for (j, b) in agents.iter().enumerate() {
            let w = net.weight(i, j);
            if w == 0.0 {
                continue;
            }
            let class = LinkClass::classify(a, b).expect("edge has a class");
            let beta = if a.is_swarm() {
                e.target_for_swarm
            } else {
                e.target_for_headquarters
            };
            let scale = (net.degree(i) as f64).powf(e.source) * (net.degree(j) as f64).powf(beta);
            let mut adj = w;
            if let (Some(p), Some(q)) = (net.slot(i), net.slot(j)) {
                let (xi, xj) = (s.positions[p], s.positions[q]);
                adj /= 1.0 + params.attenuation * (xj[0] - xi[0]).hypot(xj[1] - xi[1]);
            }
            let n_ij = if a.is_swarm() && !b.is_swarm() { nu } else { 1.0 };
            let n_ji = if b.is_swarm() && !a.is_swarm() { nu } else { 1.0 };
            let phi = if class.is_adversarial() { f.of(a.population) } else { 0.0 };
            v += params.coupling.get(class) * adj / scale * (n_ij * s.phases[j] - n_ji * s.phases[i] + phi).sin();
        }
        out.push(v);
    }
    out
}

/// Attraction, repulsion and field on swarm agent `i` with hard hill
/// indicators and exact unit vectors.
pub fn forces(
    net: &C2Network,
    params: &ModelParams,
    s: &SimState,
    f: FrustrationAssignment,
    i: usize,
) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let agents = net.agents();
    let a = &agents[i];
    let pop = a.population;
    let xi = s.positions[net.slot(i).unwrap()];
    let swarm_r = mean_field(&s.phases, &net.members(pop, Echelon::Swarm));
    let hq_r = mean_field(&s.phases, &net.members(pop, Echelon::Headquarters));
    let mut att = [0.0; 2];
    let mut rep = [0.0; 2];
    for &j in net.swarm_agents() {
        if j == i {
            continue;
        }
        let xj = s.positions[net.slot(j).unwrap()];
        let d = [xj[0] - xi[0], xj[1] - xi[1]];
        let r2 = d[0] * d[0] + d[1] * d[1];
        let r = r2.sqrt();
        let u = [d[0] / r, d[1] / r];
        let alpha = if hard_outside(params, xi) {
            0.0
        } else if hard_outside(params, xj) {
            let n = xj[0].hypot(xj[1]);
            let c3 = params.alpha_suppression;
            params.spatial_coupling * (1.0 - c3 * n / (1.0 + c3 * n))
        } else {
            params.spatial_coupling
        };
        let phi = if agents[j].population != pop { f.of(pop) } else { 0.0 };
        let k = (1.0 + alpha * (s.phases[j] - s.phases[i] + phi).cos()) / (1.0 + r2).sqrt();
        let g = params.repulsion / (1.0 + r2).powi(2);
        for c in 0..2 {
            att[c] += k * u[c];
            rep[c] += g * u[c];
        }
    }
    for c in &mut att {
        *c *= params.attraction_gain * swarm_r;
    }
    let field = if hard_outside(params, xi) {
        let g = -params.field_gain.powi(2) * hq_r;
        [g * xi[0], g * xi[1]]
    } else {
        [0.0, 0.0]
    };
    (att, rep, field)
}

/// Packed derivative: phases of every agent, then `x, y` of every swarm slot.
pub fn full_rhs(net: &C2Network, params: &ModelParams, s: &SimState, f: FrustrationAssignment) -> Vec<f64> {
    let mut out = phase_rhs(net, params, s, f);
    for &i in net.swarm_agents() {
        let (att, rep, field) = forces(net, params, s, f, i);
        out.push(att[0] - rep[0] + field[0]);
        out.push(att[1] - rep[1] + field[1]);
    }
    out
}

/// Classic fourth-order Runge–Kutta with a fixed step.
pub fn rk4(mut rhs: impl FnMut(&[f64]) -> Vec<f64>, y0: &[f64], t1: f64, dt: f64) -> Vec<f64> {
    let steps = (t1 / dt).round() as usize;
    let h = t1 / steps as f64;
    let mut y = y0.to_vec();
    let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    for _ in 0..steps {
        let k1 = rhs(&y);
        let k2 = rhs(&axpy(&y, &k1, h / 2.0));
        let k3 = rhs(&axpy(&y, &k2, h / 2.0));
        let k4 = rhs(&axpy(&y, &k3, h));
        for n in 0..y.len() {
            y[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
    }
    y
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &c| m[a][col].abs().total_cmp(&m[c][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let k = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= k * m[col][c];
            }
            b[r] -= k * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Value of a nondegenerate zero-sum game by support enumeration, with the
/// equilibrium mixtures. The row player maximises.
pub fn support_enumeration(a: &[Vec<f64>]) -> Option<(f64, Vec<f64>, Vec<f64>)> {
    let (rows, cols) = (a.len(), a[0].len());
    for k in 1..=rows.min(cols) {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                // Unknowns: k weights then the value.
                let mut mx = Vec::new();
                let mut bx = Vec::new();
                for &c in &cs {
                    let mut row: Vec<f64> = rs.iter().map(|&r| a[r][c]).collect();
                    row.push(-1.0);
                    mx.push(row);
                    bx.push(0.0);
                }
                let mut norm = vec![1.0; k];
                norm.push(0.0);
                mx.push(norm.clone());
                bx.push(1.0);
                let mut my = Vec::new();
                let mut by = Vec::new();
                for &r in &rs {
                    let mut row: Vec<f64> = cs.iter().map(|&c| a[r][c]).collect();
                    row.push(-1.0);
                    my.push(row);
                    by.push(0.0);
                }
                my.push(norm);
                by.push(1.0);
                let (Some(sx), Some(sy)) = (solve_linear(mx, bx), solve_linear(my, by)) else {
                    continue;
                };
                if sx[..k].iter().chain(&sy[..k]).any(|&w| w < -1e-12) {
                    continue;
                }
                let v = sx[k];
                let mut x = vec![0.0; rows];
                let mut y = vec![0.0; cols];
                for (n, &r) in rs.iter().enumerate() {
                    x[r] = sx[n];
                }
                for (n, &c) in cs.iter().enumerate() {
                    y[c] = sy[n];
                }
                let col_ok = (0..cols).all(|c| (0..rows).map(|r| x[r] * a[r][c]).sum::<f64>() >= v - 1e-9);
                let row_ok = (0..rows).all(|r| (0..cols).map(|c| a[r][c] * y[c]).sum::<f64>() <= v + 1e-9);
                if col_ok && row_ok {
                    return Some((v, x, y));
                }
            }
        }
    }
    None
}

/// Rows dominant and dominated under weak (`>=`) or strict (`>`) comparison.
pub fn brute_dominance(a: &[Vec<f64>], strict: bool) -> (Vec<usize>, Vec<usize>) {
    let n = a.len();
    let beats = |r: usize, s: usize| {
        a[r].iter()
            .zip(&a[s])
            .all(|(x, y)| if strict { x > y } else { x >= y })
    };
    let dominant = (0..n).filter(|&r| (0..n).all(|s| s == r || beats(r, s))).collect();
    let dominated = (0..n).filter(|&r| (0..n).any(|s| s != r && beats(s, r))).collect();
    (dominant, dominated)
}

pub fn negated_transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len())
        .map(|c| a.iter().map(|row| -row[c]).collect())
        .collect()
}

/// Left-rectangle occupancy of `population` over sampled positions.
pub fn occupancy(times: &[f64], positions: &[Vec<[f64; 2]>], pops: &[Population], population: Population, radius: f64) -> f64 {
    let mut total = 0.0;
    for k in 1..times.len() {
        let inside = positions[k - 1]
            .iter()
            .zip(pops)
            .filter(|(p, &q)| q == population && p[0].hypot(p[1]) <= radius)
            .count();
        total += inside as f64 * (times[k] - times[k - 1]);
    }
    total
}
