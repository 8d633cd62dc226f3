use std::path::PathBuf;

use thiserror::Error;

use crate::integrator::IntegrationError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid force layout: {0}")]
    InvalidLayout(String),

    #[error("invalid branching profile {profile:?} for headquarters of size {size}: {reason}")]
    InvalidBranching {
        size: usize,
        profile: Vec<usize>,
        reason: String,
    },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("agent id {id} out of range for a network of {len} agents")]
    AgentOutOfRange { id: usize, len: usize },

    #[error("agent {0} is not a swarm agent")]
    NotSwarmAgent(usize),

    #[error("order parameter requested over an empty subset")]
    EmptySubset,

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("integration failed during turn {turn}: {source}")]
    TurnFailed {
        turn: usize,
        #[source]
        source: IntegrationError,
    },

    #[error(transparent)]
    Integration(#[from] IntegrationError),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("payoff matrix has {0} invalid cell(s); refusing analysis")]
    InvalidCells(usize),

    #[error("malformed payoff matrix: {0}")]
    MalformedMatrix(String),

    #[error("seed list is empty")]
    NoSeeds,

    #[error("failed to parse config {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
