//! Adaptive Dormand–Prince 5(4) integration with dense output onto a uniform
//! sampling grid, plus hill-occupancy scoring of the sampled trajectory.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::SimState;
use crate::error::{Error as CrateError, Result};
use crate::network::Population;

/// An autonomous-or-not first order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
    /// Agent owning a state component, for error reports.
    fn owner(&self, component: usize) -> usize {
        component
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("non-finite value at t = {t} in component {component} (agent {agent})")]
    NonFinite { t: f64, component: usize, agent: usize },
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
    #[error("invalid integration request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Spacing of the output grid.
    pub output_dt: f64,
    /// Upper bound on the step size; `None` leaves it unbounded.
    pub max_step: Option<f64>,
    /// First trial step; `None` picks one from the local derivative scale.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-6,
            atol: 1e-8,
            output_dt: 0.01,
            max_step: None,
            initial_step: None,
            max_steps: 5_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |field: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CrateError::param(format!("integrator.{field}"), format!("must be finite and > 0, got {v}")))
            }
        };
        positive("rtol", self.rtol)?;
        positive("atol", self.atol)?;
        positive("output_dt", self.output_dt)?;
        if let Some(h) = self.max_step {
            positive("max_step", h)?;
        }
        if let Some(h) = self.initial_step {
            positive("initial_step", h)?;
        }
        if self.max_steps == 0 {
            return Err(CrateError::param("integrator.max_steps", "must be at least 1"));
        }
        Ok(())
    }
}

/// Uniform output grid on `[t0, t1]` with spacing at most `dt`; both ends are
/// included exactly.
pub fn output_grid(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let span = t1 - t0;
    let n = ((span / dt) - 1e-9).ceil().max(1.0) as usize;
    let mut grid: Vec<f64> = (0..n).map(|k| t0 + span * (k as f64) / (n as f64)).collect();
    grid.push(t1);
    grid
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

fn first_non_finite(v: &[f64]) -> Option<usize> {
    v.iter().position(|x| !x.is_finite())
}

fn scaled_rms(v: &[f64], scale_from: &[f64], config: &IntegratorConfig) -> f64 {
    let n = v.len().max(1) as f64;
    let sum: f64 = v
        .iter()
        .zip(scale_from)
        .map(|(&e, &y)| {
            let sc = config.atol + config.rtol * y.abs();
            (e / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

/// Integrates `system` from `(t0, y0)` to `t1`, calling `sample(t, y)` at every
/// point of [`output_grid`]. Returns the number of accepted steps.
pub fn integrate_dense<S, F>(
    system: &S,
    y0: &[f64],
    t0: f64,
    t1: f64,
    config: &IntegratorConfig,
    mut sample: F,
) -> Result<usize, IntegrationError>
where
    S: OdeSystem + ?Sized,
    F: FnMut(f64, &[f64]),
{
    let n = system.dim();
    if y0.len() != n {
        return Err(IntegrationError::InvalidRequest(format!("state has {} components, system {}", y0.len(), n)));
    }
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(IntegrationError::InvalidRequest(format!("need finite t1 > t0, got [{t0}, {t1}]")));
    }
    if let Some(c) = first_non_finite(y0) {
        return Err(IntegrationError::NonFinite {
            t: t0,
            component: c,
            agent: system.owner(c),
        });
    }
    let grid = output_grid(t0, t1, config.output_dt);
    let max_step = config.max_step.unwrap_or(f64::INFINITY).min(t1 - t0);

    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k1 = vec![0.0; n];
    system.rhs(t, &y, &mut k1);
    if let Some(c) = first_non_finite(&k1) {
        return Err(IntegrationError::NonFinite {
            t,
            component: c,
            agent: system.owner(c),
        });
    }
    sample(grid[0], &y);
    let mut next_sample = 1;

    let mut h = match config.initial_step {
        Some(h) => h,
        None => initial_step(system, t, &y, &k1, config),
    }
    .min(max_step);

    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut dense = vec![0.0; n];
    let mut interp = vec![0.0; n];
    let mut rejected_last = false;
    let mut last_bad: Option<(f64, usize)> = None;
    let mut accepted = 0usize;
    let mut attempts = 0usize;

    while next_sample < grid.len() {
        attempts += 1;
        if attempts > config.max_steps {
            return Err(IntegrationError::TooManySteps(config.max_steps));
        }
        let last = t + h >= t1 - 1e-12 * t1.abs().max(1.0);
        if last {
            h = t1 - t;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(match last_bad {
                Some((tb, c)) => IntegrationError::NonFinite {
                    t: tb,
                    component: c,
                    agent: system.owner(c),
                },
                None => IntegrationError::StepSizeUnderflow { t, h },
            });
        }

        for i in 0..n {
            stage[i] = y[i] + h * A21 * k1[i];
        }
        system.rhs(t + C2 * h, &stage, &mut k2);
        for i in 0..n {
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        system.rhs(t + C3 * h, &stage, &mut k3);
        for i in 0..n {
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        system.rhs(t + C4 * h, &stage, &mut k4);
        for i in 0..n {
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        system.rhs(t + C5 * h, &stage, &mut k5);
        for i in 0..n {
            stage[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t1 } else { t + h };
        system.rhs(t_new, &stage, &mut k6);
        for i in 0..n {
            y_new[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        system.rhs(t_new, &y_new, &mut k7);
        for i in 0..n {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }

        let bad = first_non_finite(&y_new).or_else(|| first_non_finite(&k7));
        let err_norm = if bad.is_some() {
            f64::INFINITY
        } else {
            let scale: Vec<f64> = y.iter().zip(&y_new).map(|(a, b)| a.abs().max(b.abs())).collect();
            scaled_rms(&err, &scale, config)
        };

        if !err_norm.is_finite() || err_norm > 1.0 {
            if let Some(c) = bad {
                last_bad = Some((t_new, c));
            }
            let factor = if err_norm.is_finite() {
                (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
            } else {
                MIN_FACTOR
            };
            h *= factor;
            rejected_last = true;
            continue;
        }
        last_bad = None;
        accepted += 1;

        // Dense output on (t, t_new].
        let mut dense_ready = false;
        while next_sample < grid.len() && grid[next_sample] <= t_new {
            let ts = grid[next_sample];
            if next_sample == grid.len() - 1 && last {
                sample(ts, &y_new);
            } else {
                if !dense_ready {
                    fill_dense(h, &k1, &k3, &k4, &k5, &k6, &k7, &mut dense);
                    dense_ready = true;
                }
                let theta = (ts - t) / h;
                let theta1 = 1.0 - theta;
                for i in 0..n {
                    let ydiff = y_new[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    let c4 = ydiff - h * k7[i] - bspl;
                    interp[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (c4 + theta1 * dense[i])));
                }
                sample(ts, &interp);
            }
            next_sample += 1;
        }

        let mut factor = if err_norm == 0.0 {
            MAX_FACTOR
        } else {
            (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
        };
        if rejected_last {
            factor = factor.min(1.0);
        }
        rejected_last = false;
        t = t_new;
        std::mem::swap(&mut y, &mut y_new);
        std::mem::swap(&mut k1, &mut k7);
        h = (h * factor).min(max_step);
    }
    Ok(accepted)
}

#[allow(clippy::too_many_arguments)]
fn fill_dense(
    h: f64,
    k1: &[f64],
    k3: &[f64],
    k4: &[f64],
    k5: &[f64],
    k6: &[f64],
    k7: &[f64],
    out: &mut [f64],
) {
    for i in 0..out.len() {
        out[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
}

fn initial_step<S: OdeSystem + ?Sized>(system: &S, t: f64, y: &[f64], f0: &[f64], config: &IntegratorConfig) -> f64 {
    let d0 = scaled_rms(y, y, config);
    let d1 = scaled_rms(f0, y, config);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
    let mut f1 = vec![0.0; y.len()];
    system.rhs(t + h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = scaled_rms(&diff, y, config) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// Sampled trajectory of one integration segment (or several chained ones).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SimState>,
    /// Population of each spatial slot.
    pub slot_populations: Vec<Population>,
}

impl Trajectory {
    pub fn new(slot_populations: Vec<Population>) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            slot_populations,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&SimState> {
        self.states.last()
    }

    pub fn push(&mut self, state: SimState) {
        self.times.push(state.t);
        self.states.push(state);
    }

    /// Appends `next`, dropping its first sample when it repeats our last one.
    pub fn append(&mut self, next: Trajectory) {
        let skip = match (self.times.last(), next.times.first()) {
            (Some(a), Some(b)) if a == b => 1,
            _ => 0,
        };
        for s in next.states.into_iter().skip(skip) {
            self.push(s);
        }
    }

    /// CSV export: `t,agent_id,theta,x,y` with empty `x,y` for headquarters.
    pub fn write_csv<W: std::io::Write>(&self, slot_agents: &[usize], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "agent_id", "theta", "x", "y"])?;
        let agent_count = self.states.first().map_or(0, |s| s.phases.len());
        let mut slot_of = vec![None; agent_count];
        for (k, &a) in slot_agents.iter().enumerate() {
            slot_of[a] = Some(k);
        }
        for s in &self.states {
            for (id, &theta) in s.phases.iter().enumerate() {
                let (x, y) = match slot_of[id] {
                    Some(k) => (s.positions[k][0].to_string(), s.positions[k][1].to_string()),
                    None => (String::new(), String::new()),
                };
                w.write_record([s.t.to_string(), id.to_string(), theta.to_string(), x, y])?;
            }
        }
        w.flush().map_err(|e| CrateError::io("trajectory", e))?;
        Ok(())
    }
}

/// Integrates a simulation segment and records every output sample.
pub fn integrate_segment<S: OdeSystem + ?Sized>(
    system: &S,
    start: &SimState,
    t1: f64,
    slot_populations: &[Population],
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrationError> {
    let agents = start.phases.len();
    let mut traj = Trajectory::new(slot_populations.to_vec());
    integrate_dense(system, &start.pack(), start.t, t1, config, |t, y| {
        traj.push(SimState::unpack(t, y, agents))
    })?;
    Ok(traj)
}

/// Left-rectangle accumulation of per-population hill occupancy over a
/// stream of samples. A position on the hill boundary counts as inside.
#[derive(Debug, Clone)]
pub struct OccupancyMeter {
    slot_populations: Vec<Population>,
    radius: f64,
    last: Option<(f64, [usize; 2])>,
    total: [f64; 2],
}

impl OccupancyMeter {
    pub fn new(slot_populations: &[Population], radius: f64) -> Self {
        OccupancyMeter {
            slot_populations: slot_populations.to_vec(),
            radius,
            last: None,
            total: [0.0; 2],
        }
    }

    pub fn count_inside(&self, positions: &[f64]) -> [usize; 2] {
        let mut counts = [0usize; 2];
        for (pop, p) in self.slot_populations.iter().zip(positions.chunks_exact(2)) {
            if p[0].hypot(p[1]) <= self.radius {
                counts[pop.index()] += 1;
            }
        }
        counts
    }

    /// Adds the sample at time `t`; `positions` are flattened `x, y` pairs.
    pub fn push(&mut self, t: f64, positions: &[f64]) {
        if let Some((t_prev, counts)) = self.last {
            let width = t - t_prev;
            self.total[0] += counts[0] as f64 * width;
            self.total[1] += counts[1] as f64 * width;
        }
        self.last = Some((t, self.count_inside(positions)));
    }

    pub fn score(&self, population: Population) -> f64 {
        self.total[population.index()]
    }
}

/// Hill occupancy of `population` over a trajectory: the time integral of the
/// number of its swarm agents within `hill_radius` of the origin.
pub fn accumulate_occupancy(trajectory: &Trajectory, population: Population, hill_radius: f64) -> Result<f64> {
    if trajectory.is_empty() {
        return Err(CrateError::InvalidParameter {
            field: "trajectory".into(),
            reason: "empty trajectory".into(),
        });
    }
    let mut meter = OccupancyMeter::new(&trajectory.slot_populations, hill_radius);
    for s in &trajectory.states {
        meter.push(s.t, s.positions.as_flattened());
    }
    Ok(meter.score(population))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Drift(Vec<f64>);
    impl OdeSystem for Drift {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn rhs(&self, _t: f64, _y: &[f64], dy: &mut [f64]) {
            dy.copy_from_slice(&self.0);
        }
    }

    struct Decay;
    impl OdeSystem for Decay {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = -y[0];
        }
    }

    struct Blowup;
    impl OdeSystem for Blowup {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = 0.0;
            dy[1] = y[1] * y[1];
        }
        fn owner(&self, c: usize) -> usize {
            c + 100
        }
    }

    #[test]
    fn grid_covers_both_ends() {
        let g = output_grid(0.0, 1.0, 0.25);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = output_grid(2.0, 3.0, 0.3);
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 3.0);
        let g = output_grid(0.0, 10.0, 0.01);
        assert_eq!(g.len(), 1001);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn drift_is_exact() {
        let sys = Drift(vec![0.3, -1.7, 2.5]);
        let mut last = vec![];
        integrate_dense(&sys, &[1.0, 2.0, 3.0], 0.5, 7.5, &IntegratorConfig::default(), |_, y| {
            last = y.to_vec()
        })
        .unwrap();
        for (k, v) in last.iter().enumerate() {
            let exact = [1.0, 2.0, 3.0][k] + sys.0[k] * 7.0;
            assert!((v - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_output_is_accurate() {
        let mut worst: f64 = 0.0;
        let cfg = IntegratorConfig {
            output_dt: 0.037,
            rtol: 1e-10,
            atol: 1e-12,
            ..IntegratorConfig::default()
        };
        integrate_dense(&Decay, &[1.0], 0.0, 5.0, &cfg, |t, y| {
            worst = worst.max((y[0] - (-t).exp()).abs());
        })
        .unwrap();
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn blowup_reports_agent() {
        let err = integrate_dense(&Blowup, &[0.0, 1.0], 0.0, 2.0, &IntegratorConfig::default(), |_, _| {}).unwrap_err();
        match err {
            IntegrationError::NonFinite { agent, t, .. } => {
                assert_eq!(agent, 101);
                assert!(t <= 1.5);
            }
            IntegrationError::StepSizeUnderflow { t, .. } => assert!(t < 1.0 + 1e-6),
            other => panic!("unexpected {other:?}"),
        }
        let err = integrate_dense(&Blowup, &[0.0, f64::NAN], 0.0, 2.0, &IntegratorConfig::default(), |_, _| {}).unwrap_err();
        assert!(matches!(err, IntegrationError::NonFinite { agent: 101, .. }));
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(integrate_dense(&Decay, &[1.0], 1.0, 1.0, &IntegratorConfig::default(), |_, _| {}).is_err());
    }

    fn synthetic(times: &[f64], xs: &[[f64; 2]]) -> Trajectory {
        let mut tr = Trajectory::new(vec![Population::Blue]);
        for (&t, &p) in times.iter().zip(xs) {
            tr.push(SimState {
                t,
                phases: vec![0.0],
                positions: vec![p],
            });
        }
        tr
    }

    #[test]
    fn occupancy_boundary_counts_inside() {
        let g = output_grid(0.0, 2.0, 0.5);
        let tr = synthetic(&g, &vec![[1.0, 0.0]; g.len()]);
        assert_eq!(accumulate_occupancy(&tr, Population::Blue, 1.0).unwrap(), 2.0);
        assert_eq!(accumulate_occupancy(&tr, Population::Red, 1.0).unwrap(), 0.0);
        assert_eq!(accumulate_occupancy(&tr, Population::Blue, 0.999).unwrap(), 0.0);
        assert!(accumulate_occupancy(&Trajectory::new(vec![]), Population::Blue, 1.0).is_err());
    }
}
