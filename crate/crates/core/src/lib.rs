//! Simulation engine for sequential domain-generalization games.
//!
//! A player picks parameters `β`, an adversary reweights a fixed set of
//! environment risks, and the [`game::RegretLedger`] records regret against
//! the best fixed `β` in hindsight.

pub mod adversaries;
pub mod bench;
pub mod error;
pub mod game;
pub mod linalg;
pub mod optim;
pub mod players;
pub mod tolerance;

pub use error::{ConfigIssue, Error, Result};
pub use tolerance::Tolerances;
