use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::LinkClass;

/// Coupling strength per link class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingTable {
    pub intra_hq_blue: f64,
    pub intra_hq_red: f64,
    pub intra_swarm_blue: f64,
    pub intra_swarm_red: f64,
    pub hq_adversarial: f64,
    pub swarm_adversarial: f64,
    pub controller_to_swarm_blue: f64,
    pub controller_to_swarm_red: f64,
}

impl Default for CouplingTable {
    fn default() -> Self {
        CouplingTable {
            intra_hq_blue: 0.5,
            intra_hq_red: 0.5,
            intra_swarm_blue: 8.0,
            intra_swarm_red: 4.0,
            hq_adversarial: 2.0,
            swarm_adversarial: 0.5,
            controller_to_swarm_blue: 5.0,
            controller_to_swarm_red: 5.0,
        }
    }
}

impl CouplingTable {
    pub fn uniform(value: f64) -> Self {
        CouplingTable {
            intra_hq_blue: value,
            intra_hq_red: value,
            intra_swarm_blue: value,
            intra_swarm_red: value,
            hq_adversarial: value,
            swarm_adversarial: value,
            controller_to_swarm_blue: value,
            controller_to_swarm_red: value,
        }
    }

    pub fn get(&self, class: LinkClass) -> f64 {
        match class {
            LinkClass::IntraHqBlue => self.intra_hq_blue,
            LinkClass::IntraHqRed => self.intra_hq_red,
            LinkClass::IntraSwarmBlue => self.intra_swarm_blue,
            LinkClass::IntraSwarmRed => self.intra_swarm_red,
            LinkClass::HqAdversarial => self.hq_adversarial,
            LinkClass::SwarmAdversarial => self.swarm_adversarial,
            LinkClass::ControllerToSwarmBlue => self.controller_to_swarm_blue,
            LinkClass::ControllerToSwarmRed => self.controller_to_swarm_red,
        }
    }

    fn entries(&self) -> [(&'static str, f64); 8] {
        [
            ("intra_hq_blue", self.intra_hq_blue),
            ("intra_hq_red", self.intra_hq_red),
            ("intra_swarm_blue", self.intra_swarm_blue),
            ("intra_swarm_red", self.intra_swarm_red),
            ("hq_adversarial", self.hq_adversarial),
            ("swarm_adversarial", self.swarm_adversarial),
            ("controller_to_swarm_blue", self.controller_to_swarm_blue),
            ("controller_to_swarm_red", self.controller_to_swarm_red),
        ]
    }
}

/// Exponents of the degree-scaling denominator `d_i^source * d_j^target`,
/// where the target exponent depends on whether the receiving agent `i` is a
/// headquarters or a swarm agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DegreeExponents {
    pub source: f64,
    pub target_for_headquarters: f64,
    pub target_for_swarm: f64,
}

impl Default for DegreeExponents {
    fn default() -> Self {
        DegreeExponents {
            source: 1.0,
            target_for_headquarters: 1.0,
            target_for_swarm: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub coupling: CouplingTable,
    /// Overall multiplier on the attraction force (1 reproduces the model).
    pub attraction_gain: f64,
    /// Distance attenuation constant for swarm-swarm links.
    pub attenuation: f64,
    /// Field gain; enters the field force squared.
    pub field_gain: f64,
    /// Suppression of the phase-dependent attraction by agents outside the hill.
    pub alpha_suppression: f64,
    /// Repulsion gain; above `1 + spatial_coupling` the short-range net
    /// force between any two swarm agents is repulsive.
    pub repulsion: f64,
    /// Base phase-dependent spatial coupling on all swarm pairs.
    pub spatial_coupling: f64,
    /// Ratio of swarm to headquarters decision speed on controller links.
    pub frequency_ratio: f64,
    pub hill_radius: f64,
    /// Width of the ramp that switches the field on and the phase-dependent
    /// attraction off just outside the hill. Zero gives a hard step at the
    /// hill radius.
    pub boundary_softening: f64,
    pub degree_exponents: DegreeExponents,
    /// Softening length: below this separation the pairwise direction vector
    /// shrinks linearly to zero instead of keeping unit length.
    pub pair_epsilon: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            coupling: CouplingTable::default(),
            attraction_gain: 1.0,
            attenuation: 1.0,
            field_gain: 1.0,
            alpha_suppression: 1.0,
            repulsion: 3.0,
            spatial_coupling: 1.0,
            frequency_ratio: 4.0,
            hill_radius: 1.0,
            boundary_softening: 1e-2,
            degree_exponents: DegreeExponents::default(),
            pair_epsilon: 1e-2,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.coupling.entries() {
            nonnegative(&format!("model.coupling.{name}"), v)?;
        }
        nonnegative("model.attraction_gain", self.attraction_gain)?;
        nonnegative("model.attenuation", self.attenuation)?;
        nonnegative("model.field_gain", self.field_gain)?;
        nonnegative("model.alpha_suppression", self.alpha_suppression)?;
        nonnegative("model.repulsion", self.repulsion)?;
        nonnegative("model.spatial_coupling", self.spatial_coupling)?;
        nonnegative("model.pair_epsilon", self.pair_epsilon)?;
        nonnegative("model.boundary_softening", self.boundary_softening)?;
        let e = &self.degree_exponents;
        for (name, v) in [
            ("source", e.source),
            ("target_for_headquarters", e.target_for_headquarters),
            ("target_for_swarm", e.target_for_swarm),
        ] {
            if !v.is_finite() {
                return Err(Error::param(format!("model.degree_exponents.{name}"), "must be finite"));
            }
        }
        if !(self.frequency_ratio.is_finite() && self.frequency_ratio > 1.0) {
            return Err(Error::param(
                "model.frequency_ratio",
                format!("must be finite and > 1, got {}", self.frequency_ratio),
            ));
        }
        if !(self.hill_radius.is_finite() && self.hill_radius > 0.0) {
            return Err(Error::param(
                "model.hill_radius",
                format!("must be finite and > 0, got {}", self.hill_radius),
            ));
        }
        Ok(())
    }
}

impl ModelParams {
    /// Weight of "outside the hill" at distance `norm` from the centre: 0 up
    /// to the hill radius, 1 beyond the softening ramp, smoothstep between.
    pub fn outside_gate(&self, norm: f64) -> f64 {
        let excess = norm - self.hill_radius;
        if excess <= 0.0 {
            0.0
        } else if excess >= self.boundary_softening {
            1.0
        } else {
            let t = excess / self.boundary_softening;
            t * t * (3.0 - 2.0 * t)
        }
    }
}

fn nonnegative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be finite and >= 0, got {v}")))
    }
}
