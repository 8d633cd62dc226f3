use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::network::Population;

/// Closed time window `[start, end]` of samples to include.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub const ALL: Window = Window {
        start: f64::NEG_INFINITY,
        end: f64::INFINITY,
    };

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

/// Square histogram centred on the hill, normalised to a probability density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    pub population: Population,
    /// The grid spans `[-extent, extent]` on both axes.
    pub extent: f64,
    pub resolution: usize,
    /// Row-major densities, `y` index outer.
    pub density: Vec<f64>,
    /// Positions binned into the grid.
    pub samples: usize,
    /// In-window positions that fell outside the grid.
    pub outside: usize,
}

impl DensityGrid {
    pub fn cell_size(&self) -> f64 {
        2.0 * self.extent / self.resolution as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_size().powi(2)
    }

    /// True when no position was binned; all densities are then zero.
    pub fn is_empty(&self) -> bool {
        self.samples == 0
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.density[iy * self.resolution + ix]
    }

    /// Sum of density times cell area: 1 for a non-empty grid.
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.cell_area()
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        -self.extent + (i as f64 + 0.5) * self.cell_size()
    }

    /// CSV `x,y,density` at cell centres. An empty grid writes a single
    /// comment line and no cells.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "density"])?;
        if self.is_empty() {
            w.write_record(["# empty", "", ""])?;
        } else {
            for iy in 0..self.resolution {
                for ix in 0..self.resolution {
                    w.write_record([
                        self.cell_center(ix).to_string(),
                        self.cell_center(iy).to_string(),
                        self.at(ix, iy).to_string(),
                    ])?;
                }
            }
        }
        w.flush().map_err(|e| Error::io("density grid", e))?;
        Ok(())
    }
}

/// Histogram of every sampled position of `population`'s swarm agents within
/// `window`, over all trajectories.
pub fn density_grid(
    trajectories: &[&Trajectory],
    population: Population,
    window: Window,
    extent: f64,
    resolution: usize,
) -> Result<DensityGrid> {
    if trajectories.is_empty() {
        return Err(Error::param("trajectories", "no trajectories given"));
    }
    if !(extent.is_finite() && extent > 0.0) {
        return Err(Error::param("extent", format!("must be finite and > 0, got {extent}")));
    }
    if resolution == 0 {
        return Err(Error::param("resolution", "must be at least 1"));
    }
    let mut counts = vec![0u64; resolution * resolution];
    let mut samples = 0;
    let mut outside = 0;
    let cell = 2.0 * extent / resolution as f64;
    let bin = |v: f64| -> Option<usize> {
        if !(-extent..=extent).contains(&v) {
            return None;
        }
        Some((((v + extent) / cell) as usize).min(resolution - 1))
    };
    for tr in trajectories {
        for state in tr.states.iter().filter(|s| window.contains(s.t)) {
            for (p, pop) in state.positions.iter().zip(&tr.slot_populations) {
                if *pop != population {
                    continue;
                }
                match (bin(p[0]), bin(p[1])) {
                    (Some(ix), Some(iy)) => {
                        counts[iy * resolution + ix] += 1;
                        samples += 1;
                    }
                    _ => outside += 1,
                }
            }
        }
    }
    let norm = if samples > 0 { 1.0 / (samples as f64 * cell * cell) } else { 0.0 };
    Ok(DensityGrid {
        population,
        extent,
        resolution,
        density: counts.iter().map(|&c| c as f64 * norm).collect(),
        samples,
        outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SimState;

    fn traj(points: &[(f64, [f64; 2])]) -> Trajectory {
        let mut tr = Trajectory::new(vec![Population::Blue, Population::Red]);
        for &(t, p) in points {
            tr.push(SimState {
                t,
                phases: vec![0.0; 2],
                positions: vec![p, [100.0, 100.0]],
            });
        }
        tr
    }

    #[test]
    fn stationary_agent_fills_one_cell() {
        let tr = traj(&[(0.0, [0.1, -0.1]), (1.0, [0.1, -0.1]), (2.0, [0.1, -0.1])]);
        let g = density_grid(&[&tr], Population::Blue, Window::ALL, 3.0, 120).unwrap();
        assert_eq!(g.samples, 3);
        assert_eq!(g.density.iter().filter(|&&d| d > 0.0).count(), 1);
        assert!((g.mass() - 1.0).abs() < 1e-12);
        let ix = ((0.1 + 3.0) / g.cell_size()) as usize;
        let iy = ((-0.1 + 3.0) / g.cell_size()) as usize;
        assert!(g.at(ix, iy) > 0.0);
    }

    #[test]
    fn empty_window_is_marked() {
        let tr = traj(&[(0.0, [0.0, 0.0])]);
        let g = density_grid(&[&tr], Population::Blue, Window { start: 5.0, end: 6.0 }, 3.0, 10).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.mass(), 0.0);
        let red = density_grid(&[&tr], Population::Red, Window::ALL, 3.0, 10).unwrap();
        assert!(red.is_empty());
        assert_eq!(red.outside, 1);
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("# empty"));
        assert!(density_grid(&[], Population::Blue, Window::ALL, 3.0, 10).is_err());
    }

    #[test]
    fn edge_points_are_binned() {
        let tr = traj(&[(0.0, [3.0, -3.0])]);
        let g = density_grid(&[&tr], Population::Blue, Window::ALL, 3.0, 4).unwrap();
        assert!(g.at(3, 0) > 0.0);
    }
}
