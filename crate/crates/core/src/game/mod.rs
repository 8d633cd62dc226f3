//! The two-player zero-sum game over frustration choices.

mod analysis;
mod payoff;
mod play;
mod strategy;

pub use analysis::{dominance, dominance_analysis, maximin_solve, solve_zero_sum, DominanceReport, MaximinSolution};
pub use payoff::{enumerate_payoffs, CellFailure, CellSample, PayoffCell, PayoffMatrix};
pub use play::{
    play_game, play_game_recorded, utilities, GameConfig, GameInstance, GameResult, InitialPlacement, TurnOutcome,
    TurnScore,
};
pub use strategy::{angles, format_pi, ActionSet, Strategy};
