//! Coupled phase and spatial dynamics of the two forces.

mod model;
mod params;

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::Population;

pub use model::{ForceTerms, SegmentSystem, Swarmalator};
pub use params::{CouplingTable, DegreeExponents, ModelParams};

/// Phases of all agents and positions of the swarm agents at one instant.
///
/// `positions[k]` belongs to the swarm agent in spatial slot `k`
/// (see [`crate::network::C2Network::slot`]). Phases are unwrapped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub t: f64,
    pub phases: Vec<f64>,
    pub positions: Vec<[f64; 2]>,
}

impl SimState {
    /// Packed length: all phases followed by `x, y` pairs of every slot.
    pub fn packed_len(&self) -> usize {
        self.phases.len() + 2 * self.positions.len()
    }

    pub fn pack(&self) -> Vec<f64> {
        let mut y = Vec::with_capacity(self.packed_len());
        y.extend_from_slice(&self.phases);
        y.extend_from_slice(self.positions.as_flattened());
        y
    }

    pub fn unpack(t: f64, y: &[f64], agents: usize) -> Self {
        let (phases, xy) = y.split_at(agents);
        SimState {
            t,
            phases: phases.to_vec(),
            positions: xy.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
        }
    }
}

/// Frustration chosen by each player for the current turn. It is applied on
/// adversarial links only, by the player that owns the receiving agent.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrustrationAssignment {
    pub blue: f64,
    pub red: f64,
}

impl FrustrationAssignment {
    pub fn new(blue: f64, red: f64) -> Self {
        FrustrationAssignment { blue, red }
    }

    pub fn of(&self, population: Population) -> f64 {
        match population {
            Population::Blue => self.blue,
            Population::Red => self.red,
        }
    }
}

/// Decision stage read off the phase circle, one quadrant each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OodaState {
    Observe,
    Orient,
    Decide,
    Act,
}

pub fn ooda_state(theta: f64) -> OodaState {
    let wrapped = theta.rem_euclid(TAU);
    match (wrapped / FRAC_PI_2).floor() as u8 {
        0 => OodaState::Observe,
        1 => OodaState::Orient,
        2 => OodaState::Decide,
        _ => OodaState::Act,
    }
}

/// Magnitude of the mean unit phasor of `phases[subset]`.
pub fn order_parameter(phases: &[f64], subset: &[usize]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= phases.len()) {
        return Err(Error::AgentOutOfRange {
            id: bad,
            len: phases.len(),
        });
    }
    Ok(mean_phasor_magnitude(subset.iter().map(|&i| phases[i])))
}

pub(crate) fn mean_phasor_magnitude(phases: impl Iterator<Item = f64>) -> f64 {
    let (mut re, mut im, mut n) = (0.0, 0.0, 0usize);
    for th in phases {
        let (s, c) = th.sin_cos();
        re += c;
        im += s;
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    let r = re.hypot(im) / n as f64;
    r.min(1.0)
}
