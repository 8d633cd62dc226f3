//! King-of-the-hill C2 game: two adversarial swarmalator forces, each driven
//! by a hierarchical headquarters, with a zero-sum game layered over the
//! frustration each side chooses per turn.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod harness;
pub mod integrator;
pub mod network;
pub mod seeding;

pub use error::{Error, Result};
