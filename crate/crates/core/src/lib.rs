//! Mixed-strategy Nash equilibria of continuous games.
//!
//! Each player's mixed strategy is a pushforward of the uniform distribution
//! through a parametric [`Generator`]. The solver minimizes the Monte-Carlo
//! gradient-based Nikaido-Isoda functional ("local regret") over generator
//! parameters with heavy-ball gradient descent. Pure-strategy baselines
//! (gradient descent on the GNI function, symplectic gradient adjustment)
//! share the same game abstraction and training loop.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod baselines;
pub mod error;
pub mod games;
pub mod harness;
pub mod mcgni;
pub mod optim;
pub mod pushforward;
pub mod rng;
pub mod vecops;

pub use error::{Error, Result};
pub use games::{Game, GameInstance, GameKind};
pub use mcgni::{GradEstimate, GradMode, McgniConfig, Profile};
pub use optim::{Method, MetricsRow, RunOutcome, SolverConfig};
pub use pushforward::{Generator, GeneratorKind, OmegaBatch};
