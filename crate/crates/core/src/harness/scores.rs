use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{OccupancyMeter, Trajectory};
use crate::network::Population;

/// Cumulative hill occupancy of both players at every sample time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreSeries {
    pub times: Vec<f64>,
    pub blue: Vec<f64>,
    pub red: Vec<f64>,
    /// Times at which a turn after the first starts.
    pub turn_markers: Vec<f64>,
}

impl ScoreSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_scores(&self) -> Option<(f64, f64)> {
        Some((*self.blue.last()?, *self.red.last()?))
    }

    /// CSV `t,omega_blue,omega_red,turn`, with `turn` counted from 1.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "omega_blue", "omega_red", "turn"])?;
        for k in 0..self.len() {
            let t = self.times[k];
            let turn = 1 + self.turn_markers.iter().filter(|&&m| m <= t).count();
            w.write_record([t.to_string(), self.blue[k].to_string(), self.red[k].to_string(), turn.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("score series", e))?;
        Ok(())
    }
}

/// Running occupancy integrals along a trajectory, accumulated with the same
/// rectangle rule as the per-turn scores.
pub fn score_timeseries(trajectory: &Trajectory, hill_radius: f64, turn_markers: &[f64]) -> ScoreSeries {
    let mut meter = OccupancyMeter::new(&trajectory.slot_populations, hill_radius);
    let mut series = ScoreSeries {
        times: Vec::with_capacity(trajectory.len()),
        blue: Vec::with_capacity(trajectory.len()),
        red: Vec::with_capacity(trajectory.len()),
        turn_markers: turn_markers.to_vec(),
    };
    for s in &trajectory.states {
        meter.push(s.t, s.positions.as_flattened());
        series.times.push(s.t);
        series.blue.push(meter.score(Population::Blue));
        series.red.push(meter.score(Population::Red));
    }
    series
}
