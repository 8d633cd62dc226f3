use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{FrustrationAssignment, ModelParams, SimState, Swarmalator};
use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::integrator::{integrate_dense, IntegratorConfig, OccupancyMeter, Trajectory};
use crate::network::{build_force_network, C2Network, ForceLayout, Population, Sides, UniformRange};
use crate::seeding::{stream_rng, Stream};

/// Where the swarms start and how initial phases are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialPlacement {
    pub centers: Sides<[f64; 2]>,
    /// Radius of the disk each swarm is scattered uniformly over.
    pub radius: f64,
    pub phases: UniformRange,
}

impl Default for InitialPlacement {
    fn default() -> Self {
        InitialPlacement {
            centers: Sides::new([-2.0, 0.0], [2.0, 0.0]),
            radius: 0.5,
            phases: UniformRange { low: 0.0, high: TAU },
        }
    }
}

impl InitialPlacement {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius >= 0.0) {
            return Err(Error::param("game.placement.radius", format!("must be finite and >= 0, got {}", self.radius)));
        }
        for p in Population::BOTH {
            if self.centers[p].iter().any(|v| !v.is_finite()) {
                return Err(Error::param(format!("game.placement.centers.{p}"), "must be finite"));
            }
        }
        if !(self.phases.low.is_finite() && self.phases.high.is_finite() && self.phases.low <= self.phases.high) {
            return Err(Error::param("game.placement.phases", "need finite low <= high"));
        }
        Ok(())
    }

    /// Initial phases and positions for `network`, drawn from the phase and
    /// position streams of `seed`.
    pub fn initial_state(&self, network: &C2Network, seed: u64) -> SimState {
        let mut phase_rng = stream_rng(seed, Stream::Phases);
        let phases = (0..network.len()).map(|_| self.phases.sample(&mut phase_rng)).collect();
        let mut pos_rng = stream_rng(seed, Stream::Positions);
        let positions = network
            .swarm_agents()
            .iter()
            .map(|&id| {
                let c = self.centers[network.agents()[id].population];
                let r = self.radius * pos_rng.random::<f64>().sqrt();
                let a = TAU * pos_rng.random::<f64>();
                [c[0] + r * a.cos(), c[1] + r * a.sin()]
            })
            .collect();
        SimState { t: 0.0, phases, positions }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub layout: ForceLayout,
    pub model: ModelParams,
    pub integrator: IntegratorConfig,
    /// Final time `T_f`.
    pub horizon: f64,
    /// Number of equal turns `K`.
    pub turns: usize,
    pub placement: InitialPlacement,
    pub seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            layout: ForceLayout::default(),
            model: ModelParams::default(),
            integrator: IntegratorConfig::default(),
            horizon: 20.0,
            turns: 2,
            placement: InitialPlacement::default(),
            seed: 0,
        }
    }
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        self.layout.validate()?;
        self.model.validate()?;
        self.integrator.validate()?;
        self.placement.validate()?;
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(Error::param("game.horizon", format!("must be finite and >= 0, got {}", self.horizon)));
        }
        if self.turns == 0 {
            return Err(Error::param("game.turns", "must be at least 1"));
        }
        Ok(())
    }

    /// Start time of turn `k` (0-based); `turn_boundary(K)` is the horizon.
    pub fn turn_boundary(&self, k: usize) -> f64 {
        if k >= self.turns {
            self.horizon
        } else {
            self.horizon * k as f64 / self.turns as f64
        }
    }

    pub fn with_seed(&self, seed: u64) -> GameConfig {
        GameConfig { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnScore {
    /// Blue hill occupancy over the turn.
    pub blue: f64,
    pub red: f64,
}

impl TurnScore {
    /// Blue's relative advantage `Q_B = Omega_B - Omega_R`.
    pub fn advantage_blue(&self) -> f64 {
        self.blue - self.red
    }

    /// `Q_R`, taken as the negation of `Q_B`.
    pub fn advantage_red(&self) -> f64 {
        -self.advantage_blue()
    }
}

/// Zero-sum utilities from per-turn advantages: `U_B = sum Q_B(k)` and
/// `U_R = -U_B`.
pub fn utilities(turns: &[TurnScore]) -> (f64, f64) {
    let blue: f64 = turns.iter().map(TurnScore::advantage_blue).sum();
    (blue, -blue)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub seed: u64,
    pub blue: Strategy,
    pub red: Strategy,
    pub turns: Vec<TurnScore>,
    pub utility_blue: f64,
    pub utility_red: f64,
    pub final_state: SimState,
    #[serde(skip)]
    pub trajectory: Option<Trajectory>,
}

impl GameResult {
    pub fn utilities(&self) -> (f64, f64) {
        (self.utility_blue, self.utility_red)
    }

    pub fn turn_boundaries(&self, config: &GameConfig) -> Vec<f64> {
        (0..=config.turns).map(|k| config.turn_boundary(k)).collect()
    }
}

/// Outcome of integrating one turn.
#[derive(Debug, Clone)]
pub struct TurnOutcome {
    pub end: SimState,
    pub score: TurnScore,
    pub trajectory: Option<Trajectory>,
}

/// Network and initial conditions of one seeded game. Every strategy pair
/// played from the same instance starts from identical conditions.
#[derive(Debug, Clone)]
pub struct GameInstance {
    config: GameConfig,
    network: C2Network,
    initial: SimState,
}

impl GameInstance {
    pub fn new(config: &GameConfig) -> Result<Self> {
        config.validate()?;
        let network = build_force_network(&config.layout, config.seed)?;
        let initial = config.placement.initial_state(&network, config.seed);
        Ok(GameInstance {
            config: config.clone(),
            network,
            initial,
        })
    }

    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn network(&self) -> &C2Network {
        &self.network
    }

    pub fn initial_state(&self) -> &SimState {
        &self.initial
    }

    pub fn model(&self) -> Result<Swarmalator<'_>> {
        Swarmalator::new(&self.network, &self.config.model)
    }

    /// Integrates turn `turn` (0-based) from `start` under `frustration`.
    pub fn play_turn(
        &self,
        model: &Swarmalator<'_>,
        start: &SimState,
        turn: usize,
        frustration: FrustrationAssignment,
        record: bool,
    ) -> Result<TurnOutcome> {
        let t1 = self.config.turn_boundary(turn + 1);
        let slots = model.slot_populations();
        let agents = model.agent_count();
        let mut meter = OccupancyMeter::new(slots, self.config.model.hill_radius);
        if t1 <= start.t {
            return Ok(TurnOutcome {
                end: start.clone(),
                score: TurnScore { blue: 0.0, red: 0.0 },
                trajectory: record.then(|| {
                    let mut tr = Trajectory::new(slots.to_vec());
                    tr.push(start.clone());
                    tr
                }),
            });
        }
        let mut trajectory = record.then(|| Trajectory::new(slots.to_vec()));
        let mut end = None;
        let system = model.with_frustration(frustration);
        integrate_dense(&system, &start.pack(), start.t, t1, &self.config.integrator, |t, y| {
            meter.push(t, &y[agents..]);
            if let Some(tr) = trajectory.as_mut() {
                tr.push(SimState::unpack(t, y, agents));
            }
            if t == t1 {
                end = Some(SimState::unpack(t, y, agents));
            }
        })
        .map_err(|source| Error::TurnFailed { turn: turn + 1, source })?;
        Ok(TurnOutcome {
            end: end.expect("integration samples the segment end"),
            score: TurnScore {
                blue: meter.score(Population::Blue),
                red: meter.score(Population::Red),
            },
            trajectory,
        })
    }

    pub fn play(&self, blue: &Strategy, red: &Strategy, record: bool) -> Result<GameResult> {
        let k = self.config.turns;
        for (who, s) in [("blue", blue), ("red", red)] {
            if s.turns() != k {
                return Err(Error::InvalidStrategy(format!("{who} strategy has {} turns, game has {k}", s.turns())));
            }
        }
        let model = self.model()?;
        let mut state = self.initial.clone();
        let mut turns = Vec::with_capacity(k);
        let mut trajectory = record.then(|| Trajectory::new(model.slot_populations().to_vec()));
        for turn in 0..k {
            let f = FrustrationAssignment::new(blue.at(turn), red.at(turn));
            let out = self.play_turn(&model, &state, turn, f, record)?;
            turns.push(out.score);
            if let (Some(all), Some(part)) = (trajectory.as_mut(), out.trajectory) {
                all.append(part);
            }
            state = out.end;
        }
        let (utility_blue, utility_red) = utilities(&turns);
        Ok(GameResult {
            seed: self.config.seed,
            blue: blue.clone(),
            red: red.clone(),
            turns,
            utility_blue,
            utility_red,
            final_state: state,
            trajectory,
        })
    }
}

/// Plays one seeded game. The seed in `config` fixes frequencies and initial
/// conditions; the strategies only change the frustration per turn.
pub fn play_game(config: &GameConfig, blue: &Strategy, red: &Strategy) -> Result<GameResult> {
    GameInstance::new(config)?.play(blue, red, false)
}

/// As [`play_game`], keeping the full sampled trajectory.
pub fn play_game_recorded(config: &GameConfig, blue: &Strategy, red: &Strategy) -> Result<GameResult> {
    GameInstance::new(config)?.play(blue, red, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> GameConfig {
        GameConfig {
            layout: ForceLayout::mirrored(3, 3),
            horizon: 2.0,
            ..GameConfig::default()
        }
    }

    #[test]
    fn utilities_arithmetic() {
        let t = [TurnScore { blue: 5.0, red: 2.0 }, TurnScore { blue: 1.0, red: 2.0 }];
        assert_eq!(utilities(&t), (2.0, -2.0));
        let tied = [TurnScore { blue: 1.5, red: 1.5 }; 3];
        assert_eq!(utilities(&tied), (0.0, -0.0));
    }

    #[test]
    fn zero_horizon_scores_nothing() {
        let cfg = GameConfig {
            horizon: 0.0,
            ..tiny()
        };
        let s = Strategy::constant(0.0, 2).unwrap();
        let r = play_game(&cfg, &s, &s).unwrap();
        assert!(r.turns.iter().all(|t| t.blue == 0.0 && t.red == 0.0));
        assert_eq!(r.utilities(), (0.0, -0.0));
    }

    #[test]
    fn strategy_length_must_match() {
        let s1 = Strategy::constant(0.0, 1).unwrap();
        let s2 = Strategy::constant(0.0, 2).unwrap();
        assert!(matches!(play_game(&tiny(), &s1, &s2), Err(Error::InvalidStrategy(_))));
    }

    #[test]
    fn initial_conditions_depend_only_on_seed() {
        let cfg = tiny();
        let a = GameInstance::new(&cfg).unwrap();
        let b = GameInstance::new(&cfg).unwrap();
        assert_eq!(a.initial_state(), b.initial_state());
        let c = GameInstance::new(&cfg.with_seed(1)).unwrap();
        assert_ne!(a.initial_state(), c.initial_state());
        for (k, p) in a.initial_state().positions.iter().enumerate() {
            let pop = a.network().agents()[a.network().swarm_agents()[k]].population;
            let centre = cfg.placement.centers[pop];
            assert!((p[0] - centre[0]).hypot(p[1] - centre[1]) <= 0.5);
        }
    }

    #[test]
    fn recorded_game_matches_unrecorded() {
        let cfg = tiny();
        let b = Strategy::new(vec![0.5, 1.0]).unwrap();
        let r = Strategy::new(vec![0.0, 2.0]).unwrap();
        let plain = play_game(&cfg, &b, &r).unwrap();
        let rec = play_game_recorded(&cfg, &b, &r).unwrap();
        assert_eq!(plain.turns, rec.turns);
        assert_eq!(plain.final_state, rec.final_state);
        let tr = rec.trajectory.unwrap();
        assert_eq!(tr.times.first(), Some(&0.0));
        assert_eq!(tr.times.last(), Some(&2.0));
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }
}
