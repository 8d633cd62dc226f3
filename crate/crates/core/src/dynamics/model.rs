use crate::dynamics::{FrustrationAssignment, ModelParams, SimState};
use crate::error::{Error, Result};
use crate::integrator::OdeSystem;
use crate::network::{C2Network, Echelon, Population, Sides};

/// One directed coupling `i <- j` in the phase equation.
#[derive(Debug, Clone)]
struct PhaseLink {
    j: usize,
    /// `sigma[class] * A_ij / (d_i^b1 * d_j^b2)`, before distance attenuation.
    weight: f64,
    /// Spatial slots of both endpoints when the link is attenuated by distance.
    attenuated: Option<(usize, usize)>,
    /// Frequency ratio applies to the neighbour's phase.
    scale_j: bool,
    /// Frequency ratio applies to the receiving agent's phase.
    scale_i: bool,
    adversarial: bool,
}

/// Right-hand side of the coupled system for one network and parameter set.
///
/// Packed state layout: `theta_0 .. theta_{L-1}` followed by `x, y` of every
/// spatial slot in slot order.
#[derive(Debug, Clone)]
pub struct Swarmalator<'a> {
    network: &'a C2Network,
    params: &'a ModelParams,
    omega: Vec<f64>,
    links: Vec<Vec<PhaseLink>>,
    population: Vec<Population>,
    slot_agent: Vec<usize>,
    slot_population: Vec<Population>,
    swarm: Sides<Vec<usize>>,
    headquarters: Sides<Vec<usize>>,
    needs_scaled_phase: Vec<bool>,
}

/// Per-agent spatial force decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceTerms {
    pub agent: usize,
    pub attraction: [f64; 2],
    pub repulsion: [f64; 2],
    pub field: [f64; 2],
}

/// Trig values and order parameters shared by every term of one evaluation.
struct Cache {
    sin: Vec<f64>,
    cos: Vec<f64>,
    sin_scaled: Vec<f64>,
    cos_scaled: Vec<f64>,
    norm: Vec<f64>,
    swarm_r: Sides<f64>,
    hq_r: Sides<f64>,
}

impl<'a> Swarmalator<'a> {
    pub fn new(network: &'a C2Network, params: &'a ModelParams) -> Result<Self> {
        params.validate()?;
        let agents = network.agents();
        let n = agents.len();
        let exps = &params.degree_exponents;
        let mut needs_scaled_phase = vec![false; n];
        let mut links = Vec::with_capacity(n);
        for a in agents {
            let i = a.id;
            let target_exp = if a.is_swarm() {
                exps.target_for_swarm
            } else {
                exps.target_for_headquarters
            };
            let di = (network.degree(i) as f64).powf(exps.source);
            let mut row = Vec::with_capacity(network.degree(i));
            for &j in network.neighbors(i) {
                let b = &agents[j];
                let class = network
                    .link_class(i, j)?
                    .expect("neighbour lists and link classes agree");
                let dj = (network.degree(j) as f64).powf(target_exp);
                let weight = params.coupling.get(class) * network.weight(i, j) / (di * dj);
                let attenuated = match (network.slot(i), network.slot(j)) {
                    (Some(p), Some(q)) => Some((p, q)),
                    _ => None,
                };
                // N_ij = nu for a swarm row and headquarters column, else 1.
                let scale_j = a.is_swarm() && !b.is_swarm();
                let scale_i = b.is_swarm() && !a.is_swarm();
                if scale_j {
                    needs_scaled_phase[j] = true;
                }
                if scale_i {
                    needs_scaled_phase[i] = true;
                }
                row.push(PhaseLink {
                    j,
                    weight,
                    attenuated,
                    scale_j,
                    scale_i,
                    adversarial: class.is_adversarial(),
                });
            }
            links.push(row);
        }
        let slot_agent = network.swarm_agents().to_vec();
        let slot_population = slot_agent.iter().map(|&id| agents[id].population).collect();
        Ok(Swarmalator {
            network,
            params,
            omega: network.omegas(),
            links,
            population: agents.iter().map(|a| a.population).collect(),
            slot_agent,
            slot_population,
            swarm: Sides::new(
                network.members(Population::Blue, Echelon::Swarm),
                network.members(Population::Red, Echelon::Swarm),
            ),
            headquarters: Sides::new(
                network.members(Population::Blue, Echelon::Headquarters),
                network.members(Population::Red, Echelon::Headquarters),
            ),
            needs_scaled_phase,
        })
    }

    pub fn network(&self) -> &'a C2Network {
        self.network
    }

    pub fn params(&self) -> &'a ModelParams {
        self.params
    }

    pub fn agent_count(&self) -> usize {
        self.omega.len()
    }

    pub fn slot_count(&self) -> usize {
        self.slot_agent.len()
    }

    pub fn packed_len(&self) -> usize {
        self.agent_count() + 2 * self.slot_count()
    }

    /// Population of the swarm agent in each spatial slot.
    pub fn slot_populations(&self) -> &[Population] {
        &self.slot_population
    }

    fn check_state(&self, state: &SimState) -> Result<()> {
        if state.phases.len() != self.agent_count() {
            return Err(Error::DimensionMismatch {
                what: "phases",
                expected: self.agent_count(),
                got: state.phases.len(),
            });
        }
        if state.positions.len() != self.slot_count() {
            return Err(Error::DimensionMismatch {
                what: "positions",
                expected: self.slot_count(),
                got: state.positions.len(),
            });
        }
        Ok(())
    }

    fn swarm_slot(&self, i: usize) -> Result<usize> {
        if i >= self.agent_count() {
            return Err(Error::AgentOutOfRange {
                id: i,
                len: self.agent_count(),
            });
        }
        self.network.slot(i).ok_or(Error::NotSwarmAgent(i))
    }

    fn cache(&self, phases: &[f64], xy: &[f64]) -> Cache {
        let n = phases.len();
        let nu = self.params.frequency_ratio;
        let mut sin = Vec::with_capacity(n);
        let mut cos = Vec::with_capacity(n);
        let mut sin_scaled = vec![0.0; n];
        let mut cos_scaled = vec![0.0; n];
        for (i, &th) in phases.iter().enumerate() {
            let (s, c) = th.sin_cos();
            sin.push(s);
            cos.push(c);
            if self.needs_scaled_phase[i] {
                let (s, c) = (nu * th).sin_cos();
                sin_scaled[i] = s;
                cos_scaled[i] = c;
            }
        }
        let norm = xy.chunks_exact(2).map(|p| p[0].hypot(p[1])).collect();
        let r = |ids: &[usize]| {
            if ids.is_empty() {
                return 0.0;
            }
            let (mut re, mut im) = (0.0, 0.0);
            for &k in ids {
                re += cos[k];
                im += sin[k];
            }
            (re.hypot(im) / ids.len() as f64).min(1.0)
        };
        let swarm_r = self.swarm.map(|ids| r(ids));
        let hq_r = self.headquarters.map(|ids| r(ids));
        Cache {
            sin,
            cos,
            sin_scaled,
            cos_scaled,
            norm,
            swarm_r,
            hq_r,
        }
    }

    /// Effective adjacency `A_ij(x)`: attenuated by distance between two swarm
    /// agents, unchanged otherwise. Zero for absent edges.
    pub fn effective_adjacency(&self, state: &SimState, i: usize, j: usize) -> Result<f64> {
        self.check_state(state)?;
        let base = self.network.weight(i, j);
        if base == 0.0 {
            return Ok(0.0);
        }
        Ok(match (self.network.slot(i), self.network.slot(j)) {
            (Some(p), Some(q)) => {
                let dist = distance(state.positions.as_flattened(), p, q);
                base / (1.0 + self.params.attenuation * dist)
            }
            _ => base,
        })
    }

    fn phase_derivatives(&self, phases: &[f64], xy: &[f64], c: &Cache, f: FrustrationAssignment, out: &mut [f64]) {
        let c1 = self.params.attenuation;
        for (i, row) in self.links.iter().enumerate() {
            let phi = f.of(self.population[i]);
            let (sin_phi, cos_phi) = phi.sin_cos();
            let mut acc = 0.0;
            for link in row {
                let j = link.j;
                let (su, cu) = if link.scale_j {
                    (c.sin_scaled[j], c.cos_scaled[j])
                } else {
                    (c.sin[j], c.cos[j])
                };
                let (sv, cv) = if link.scale_i {
                    (c.sin_scaled[i], c.cos_scaled[i])
                } else {
                    (c.sin[i], c.cos[i])
                };
                // sin(u - v + phi) from cached sines and cosines.
                let s = su * cv - cu * sv;
                let mut term = if link.adversarial {
                    let co = cu * cv + su * sv;
                    s * cos_phi + co * sin_phi
                } else {
                    s
                };
                term *= link.weight;
                if let Some((p, q)) = link.attenuated {
                    term /= 1.0 + c1 * distance(xy, p, q);
                }
                acc += term;
            }
            out[i] = self.omega[i] + acc;
        }
        debug_assert_eq!(phases.len(), out.len());
    }

    /// Attraction, repulsion and field force on the agent in slot `p`.
    fn slot_forces(&self, xy: &[f64], c: &Cache, f: FrustrationAssignment, p: usize) -> ForceTerms {
        let pr = &self.params;
        let i = self.slot_agent[p];
        let pop = self.slot_population[p];
        let (xi, yi) = (xy[2 * p], xy[2 * p + 1]);
        let inside = 1.0 - pr.outside_gate(c.norm[p]);
        let (sin_phi, cos_phi) = f.of(pop).sin_cos();
        let mut att = [0.0; 2];
        let mut rep = [0.0; 2];
        for q in 0..self.slot_agent.len() {
            if q == p {
                continue;
            }
            let dx = xy[2 * q] - xi;
            let dy = xy[2 * q + 1] - yi;
            let dist2 = dx * dx + dy * dy;
            let dist = dist2.sqrt();
            if dist == 0.0 {
                continue;
            }
            let reach = dist.max(pr.pair_epsilon);
            let (ux, uy) = (dx / reach, dy / reach);
            let mut strength = 1.0;
            if inside > 0.0 {
                let nj = c.norm[q];
                let suppression = pr.outside_gate(nj) * pr.alpha_suppression * nj / (1.0 + pr.alpha_suppression * nj);
                let alpha = inside * pr.spatial_coupling * (1.0 - suppression);
                if alpha != 0.0 {
                    let j = self.slot_agent[q];
                    // cos(theta_j - theta_i + phi_s)
                    let cd = c.cos[j] * c.cos[i] + c.sin[j] * c.sin[i];
                    let cosine = if self.slot_population[q] != pop {
                        let sd = c.sin[j] * c.cos[i] - c.cos[j] * c.sin[i];
                        cd * cos_phi - sd * sin_phi
                    } else {
                        cd
                    };
                    strength += alpha * cosine;
                }
            }
            let a = strength / (1.0 + dist2).sqrt();
            att[0] += a * ux;
            att[1] += a * uy;
            let r = pr.repulsion / ((1.0 + dist2) * (1.0 + dist2));
            rep[0] += r * ux;
            rep[1] += r * uy;
        }
        let order = pr.attraction_gain * c.swarm_r[pop];
        att[0] *= order;
        att[1] *= order;
        let gate = pr.outside_gate(c.norm[p]);
        let field = if gate > 0.0 {
            let g = -pr.field_gain * pr.field_gain * c.hq_r[pop] * gate;
            [g * xi, g * yi]
        } else {
            [0.0, 0.0]
        };
        ForceTerms {
            agent: i,
            attraction: att,
            repulsion: rep,
            field,
        }
    }

    /// Evaluates the packed derivative `dy = f(y)` for a fixed frustration.
    pub fn eval_packed(&self, y: &[f64], dy: &mut [f64], f: FrustrationAssignment) {
        let n = self.agent_count();
        let (phases, xy) = y.split_at(n);
        let (dphase, dxy) = dy.split_at_mut(n);
        let c = self.cache(phases, xy);
        self.phase_derivatives(phases, xy, &c, f, dphase);
        for p in 0..self.slot_count() {
            let t = self.slot_forces(xy, &c, f, p);
            dxy[2 * p] = t.attraction[0] - t.repulsion[0] + t.field[0];
            dxy[2 * p + 1] = t.attraction[1] - t.repulsion[1] + t.field[1];
        }
    }

    pub fn phase_rhs(&self, state: &SimState, f: FrustrationAssignment) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let xy = state.positions.as_flattened();
        let c = self.cache(&state.phases, xy);
        let mut out = vec![0.0; self.agent_count()];
        self.phase_derivatives(&state.phases, xy, &c, f, &mut out);
        Ok(out)
    }

    fn terms_for(&self, i: usize, state: &SimState, f: FrustrationAssignment) -> Result<ForceTerms> {
        self.check_state(state)?;
        let p = self.swarm_slot(i)?;
        let xy = state.positions.as_flattened();
        let c = self.cache(&state.phases, xy);
        Ok(self.slot_forces(xy, &c, f, p))
    }

    pub fn attraction_force(&self, i: usize, state: &SimState, f: FrustrationAssignment) -> Result<[f64; 2]> {
        Ok(self.terms_for(i, state, f)?.attraction)
    }

    /// Repulsion as it enters the spatial equation, where it is subtracted.
    pub fn repulsion_force(&self, i: usize, state: &SimState) -> Result<[f64; 2]> {
        Ok(self.terms_for(i, state, FrustrationAssignment::default())?.repulsion)
    }

    pub fn field_force(&self, i: usize, state: &SimState) -> Result<[f64; 2]> {
        Ok(self.terms_for(i, state, FrustrationAssignment::default())?.field)
    }

    /// Velocity of every swarm agent, in slot order.
    pub fn spatial_rhs(&self, state: &SimState, f: FrustrationAssignment) -> Result<Vec<[f64; 2]>> {
        Ok(self
            .force_breakdown(state, f)?
            .into_iter()
            .map(|t| {
                [
                    t.attraction[0] - t.repulsion[0] + t.field[0],
                    t.attraction[1] - t.repulsion[1] + t.field[1],
                ]
            })
            .collect())
    }

    pub fn force_breakdown(&self, state: &SimState, f: FrustrationAssignment) -> Result<Vec<ForceTerms>> {
        self.check_state(state)?;
        let xy = state.positions.as_flattened();
        let c = self.cache(&state.phases, xy);
        Ok((0..self.slot_count()).map(|p| self.slot_forces(xy, &c, f, p)).collect())
    }

    /// Phase derivatives followed by velocities, in packed layout.
    pub fn full_rhs(&self, state: &SimState, f: FrustrationAssignment) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let y = state.pack();
        let mut dy = vec![0.0; y.len()];
        self.eval_packed(&y, &mut dy, f);
        Ok(dy)
    }

    /// Agent owning a packed component.
    pub fn component_owner(&self, component: usize) -> usize {
        let n = self.agent_count();
        if component < n {
            component
        } else {
            self.slot_agent[(component - n) / 2]
        }
    }

    /// The system with frustrations frozen for one turn.
    pub fn with_frustration(&'a self, frustration: FrustrationAssignment) -> SegmentSystem<'a> {
        SegmentSystem {
            model: self,
            frustration,
        }
    }
}

fn distance(xy: &[f64], p: usize, q: usize) -> f64 {
    let dx = xy[2 * q] - xy[2 * p];
    let dy = xy[2 * q + 1] - xy[2 * p + 1];
    (dx * dx + dy * dy).sqrt()
}

/// [`Swarmalator`] with a fixed frustration, as an ODE for the integrator.
#[derive(Debug, Clone, Copy)]
pub struct SegmentSystem<'a> {
    model: &'a Swarmalator<'a>,
    frustration: FrustrationAssignment,
}

impl OdeSystem for SegmentSystem<'_> {
    fn dim(&self) -> usize {
        self.model.packed_len()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        self.model.eval_packed(y, dy, self.frustration);
    }

    fn owner(&self, component: usize) -> usize {
        self.model.component_owner(component)
    }
}
