//! Seeded generators for the benchmark game families.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rand::distributions::{Distribution, Open01, Uniform};
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{BlottoGame, GameInstance, GameKind, Payload, QuadraticGame};
use crate::error::{Error, Result};
use crate::rng::{self, SolverRng};

/// Entry distributions for randomly generated payoff matrices.
///
/// The multi-player family draws every entry of `Q_i` from one of these,
/// standing in for the random payoff distributions of GAMUT.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntryDist {
    /// U[0, 1]
    Uniform01,
    /// U[-1, 1]
    UniformSym,
    /// N(0, 1)
    Normal,
    /// Exp(1)
    Exponential,
    /// Uniform over {-1, 0, 1}
    Ternary,
}

impl EntryDist {
    pub const ALL: [EntryDist; 5] = [
        EntryDist::Uniform01,
        EntryDist::UniformSym,
        EntryDist::Normal,
        EntryDist::Exponential,
        EntryDist::Ternary,
    ];

    pub fn id(self) -> &'static str {
        match self {
            EntryDist::Uniform01 => "uniform01",
            EntryDist::UniformSym => "uniform_sym",
            EntryDist::Normal => "normal",
            EntryDist::Exponential => "exponential",
            EntryDist::Ternary => "ternary",
        }
    }

    pub fn sample(self, rng: &mut SolverRng) -> f64 {
        match self {
            EntryDist::Uniform01 => rng.gen::<f64>(),
            EntryDist::UniformSym => Uniform::new_inclusive(-1.0, 1.0).sample(rng),
            EntryDist::Normal => StandardNormal.sample(rng),
            EntryDist::Exponential => Exp1.sample(rng),
            EntryDist::Ternary => rng.gen_range(-1i32..=1) as f64,
        }
    }
}

impl fmt::Display for EntryDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for EntryDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntryDist::ALL
            .into_iter()
            .find(|d| d.id() == s)
            .ok_or_else(|| Error::UnknownDistribution(s.to_string()))
    }
}

fn random_matrix(rng: &mut SolverRng, n: usize, dist: EntryDist) -> Array2<f64> {
    Array2::from_shape_simple_fn((n, n), || dist.sample(rng))
}

fn random_vector(rng: &mut SolverRng, n: usize, dist: EntryDist) -> Vec<f64> {
    (0..n).map(|_| dist.sample(rng)).collect()
}

/// Two-player quadratic game with `n_i` actions per player.
///
/// Draw order is `Q_1, Q_2, r_1, r_2`, each row-major.
pub fn gen_quadratic(seed: u64, n_i: usize, dist: EntryDist) -> GameInstance {
    assert!(n_i >= 1, "n_i must be positive");
    let mut rng = rng::seeded(seed, rng::stream::GAME);
    let n = 2 * n_i;
    let q = (0..2).map(|_| random_matrix(&mut rng, n, dist)).collect();
    let r = (0..2).map(|_| random_vector(&mut rng, n, dist)).collect();
    let game = QuadraticGame::new(vec![n_i, n_i], q, r).expect("generated shapes are consistent");
    GameInstance {
        kind: GameKind::Quadratic,
        seed: Some(seed),
        dist: None,
        payload: Payload::Quadratic(game),
    }
}

/// Blotto game over `m` battlefields with budgets drawn from U(0, 1).
pub fn gen_blotto(seed: u64, m: usize) -> GameInstance {
    assert!(m >= 1, "m must be positive");
    let mut rng = rng::seeded(seed, rng::stream::GAME);
    let x1: f64 = rng.sample(Open01);
    let x2: f64 = rng.sample(Open01);
    let game = BlottoGame::new(m, x1, x2).expect("budgets in (0,1)");
    GameInstance {
        kind: GameKind::Blotto,
        seed: Some(seed),
        dist: None,
        payload: Payload::Blotto(game),
    }
}

/// `players`-player quadratic game with `r_i = 0` and `Q_i` entries from `dist`.
pub fn gen_gamut(seed: u64, players: usize, n_i: usize, dist: EntryDist) -> GameInstance {
    assert!(players >= 1 && n_i >= 1, "players and n_i must be positive");
    let mut rng = rng::seeded(seed, rng::stream::GAME);
    let n = players * n_i;
    let q = (0..players).map(|_| random_matrix(&mut rng, n, dist)).collect();
    let r = vec![vec![0.0; n]; players];
    let game = QuadraticGame::new(vec![n_i; players], q, r).expect("generated shapes are consistent");
    GameInstance {
        kind: GameKind::MultiQuadratic,
        seed: Some(seed),
        dist: Some(dist),
        payload: Payload::Quadratic(game),
    }
}
