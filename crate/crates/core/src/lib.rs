//! Counterfactual regret minimization with discounting for two-player
//! zero-sum extensive-form games.

pub mod bench;
pub mod cfr;
pub mod eval;
pub mod game;
pub mod games;
pub mod mccfr;
pub mod regret;
