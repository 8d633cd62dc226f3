//! Run configuration: one TOML file describing the forces, the model, the
//! solver, the game and the experiment outputs.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::game::{angles, ActionSet, GameConfig, InitialPlacement, Strategy};
use crate::integrator::IntegratorConfig;
use crate::network::ForceLayout;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GameSection {
    /// Final time `T_f`.
    pub horizon: f64,
    /// Number of equal turns `K`.
    pub turns: usize,
    pub actions: ActionSet,
    pub placement: InitialPlacement,
}

impl Default for GameSection {
    fn default() -> Self {
        GameSection {
            horizon: 20.0,
            turns: 2,
            actions: ActionSet::default(),
            placement: InitialPlacement::default(),
        }
    }
}

/// Which supplementary outputs a sweep writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessSettings {
    /// Write density grids and score traces next to the payoff outputs.
    pub figures: bool,
    /// Blue frustrations for the constant-strategy density and score scan.
    #[serde(deserialize_with = "angles::deserialize")]
    pub frustration_scan: Vec<f64>,
    /// Red's constant frustration during the scan.
    #[serde(deserialize_with = "angles::deserialize_one")]
    pub scan_red: f64,
    /// Blue strategies whose score traces are written against every Red
    /// strategy.
    pub trace_blue: Vec<Strategy>,
    /// Density grid covers `[-extent, extent]^2`.
    pub density_extent: f64,
    pub density_resolution: usize,
    pub strict_dominance: bool,
}

impl Default for HarnessSettings {
    fn default() -> Self {
        HarnessSettings {
            figures: true,
            frustration_scan: vec![0.0, PI / 2.0, PI],
            scan_red: 0.0,
            trace_blue: vec![Strategy::new(vec![PI / 3.0, PI / 3.0]).unwrap()],
            density_extent: 3.0,
            density_resolution: 120,
            strict_dominance: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seeds: Vec<u64>,
    pub output_dir: Option<PathBuf>,
    pub layout: ForceLayout,
    pub model: ModelParams,
    pub integrator: IntegratorConfig,
    pub game: GameSection,
    pub harness: HarnessSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            seeds: vec![0],
            output_dir: None,
            layout: ForceLayout::default(),
            model: ModelParams::default(),
            integrator: IntegratorConfig::default(),
            game: GameSection::default(),
            harness: HarnessSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::param(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if self.seeds.is_empty() {
            return Err(Error::NoSeeds);
        }
        self.game_config(self.seeds[0]).validate()?;
        let h = &self.harness;
        for &phi in &h.frustration_scan {
            Strategy::constant(phi, 1).map_err(|e| Error::param("harness.frustration_scan", e.to_string()))?;
        }
        Strategy::constant(h.scan_red, 1).map_err(|e| Error::param("harness.scan_red", e.to_string()))?;
        for s in &h.trace_blue {
            if s.turns() != self.game.turns {
                return Err(Error::param(
                    "harness.trace_blue",
                    format!("has {} turns, game has {}", s.turns(), self.game.turns),
                ));
            }
        }
        if !(h.density_extent.is_finite() && h.density_extent > 0.0) {
            return Err(Error::param("harness.density_extent", "must be finite and > 0"));
        }
        if h.density_resolution == 0 {
            return Err(Error::param("harness.density_resolution", "must be at least 1"));
        }
        Ok(())
    }

    /// The game played for one seed.
    pub fn game_config(&self, seed: u64) -> GameConfig {
        GameConfig {
            layout: self.layout.clone(),
            model: self.model.clone(),
            integrator: self.integrator.clone(),
            horizon: self.game.horizon,
            turns: self.game.turns,
            placement: self.game.placement.clone(),
            seed,
        }
    }

    /// SHA-256 of the canonical JSON form, ignoring the output directory.
    pub fn config_hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        let json = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }
}

/// Reads and validates a config file. An empty file yields the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::from_toml(&text, path)
}

pub fn save_config(config: &RunConfig, path: &Path) -> Result<()> {
    std::fs::write(path, config.to_toml()).map_err(|e| Error::io(path, e))
}
