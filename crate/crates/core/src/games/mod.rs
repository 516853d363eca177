//! Continuous games with smooth per-player costs.
//!
//! Every player minimizes its own cost `f_i(x)` over its block `x_i` of the
//! joint action vector. Gradients are taken with respect to the whole joint
//! vector, so `cost_grad(i, x)[block(k)]` is player `k`'s sensitivity of
//! player `i`'s cost.

mod blotto;
mod generate;
mod quadratic;

use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use blotto::{BlottoGame, FEASIBLE_FLOOR};
pub use generate::{gen_blotto, gen_gamut, gen_quadratic, EntryDist};
pub use quadratic::QuadraticGame;

use crate::error::{Error, Result};
use crate::vecops;

/// Default relative step for finite-difference Hessian-vector products.
pub const DEFAULT_HVP_EPS0: f64 = 1e-5;

/// Smallest direction norm treated as nonzero in finite-difference steps.
pub const TINY: f64 = 1e-300;

/// Step length for a central difference along `v` at `x`.
pub fn fd_step(eps0: f64, x_norm: f64, v_norm: f64) -> f64 {
    eps0 * (1.0 + x_norm) / v_norm.max(TINY)
}

pub trait Game: Send + Sync {
    fn num_players(&self) -> usize;

    /// Action dimension of each player (raw coordinates for reparametrized games).
    fn dims(&self) -> &[usize];

    fn cost(&self, i: usize, x: &[f64]) -> Result<f64>;

    /// Gradient of `cost(i, .)` with respect to the full joint vector.
    fn cost_grad(&self, i: usize, x: &[f64]) -> Result<Vec<f64>>;

    /// Hessian of `cost(i, .)` applied to `v`. The default is a central
    /// difference of `cost_grad` with step `fd_step(DEFAULT_HVP_EPS0, |x|, |v|)`.
    fn cost_hvp(&self, i: usize, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        fd_cost_hvp(self, i, x, v, DEFAULT_HVP_EPS0)
    }

    fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// Index range of player `i` inside the joint vector.
    fn block(&self, i: usize) -> Range<usize> {
        let start: usize = self.dims()[..i].iter().sum();
        start..start + self.dims()[i]
    }
}

/// Validates the arguments shared by all cost evaluations.
pub fn check_point<G: Game + ?Sized>(game: &G, i: usize, x: &[f64]) -> Result<()> {
    if i >= game.num_players() {
        return Err(Error::PlayerOutOfRange {
            index: i,
            players: game.num_players(),
        });
    }
    if x.len() != game.total_dim() {
        return Err(Error::DimensionMismatch {
            what: "joint action",
            expected: game.total_dim(),
            got: x.len(),
        });
    }
    if !vecops::all_finite(x) {
        return Err(Error::NonFinite { what: "joint action" });
    }
    Ok(())
}

/// Central-difference Hessian-vector product of `cost_grad`.
pub fn fd_cost_hvp<G: Game + ?Sized>(
    game: &G,
    i: usize,
    x: &[f64],
    v: &[f64],
    eps0: f64,
) -> Result<Vec<f64>> {
    check_point(game, i, x)?;
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "HVP direction",
            expected: x.len(),
            got: v.len(),
        });
    }
    let v_norm = vecops::norm(v);
    if v_norm == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    let eps = fd_step(eps0, vecops::norm(x), v_norm);
    let plus = game.cost_grad(i, &vecops::add_scaled(x, eps, v))?;
    let minus = game.cost_grad(i, &vecops::add_scaled(x, -eps, v))?;
    let out: Vec<f64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| (p - m) / (2.0 * eps))
        .collect();
    if !vecops::all_finite(&out) {
        return Err(Error::NonFinite { what: "Hessian-vector product" });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Quadratic,
    Blotto,
    MultiQuadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Quadratic(QuadraticGame),
    Blotto(BlottoGame),
}

/// A generated benchmark game together with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct GameInstance {
    pub kind: GameKind,
    pub seed: Option<u64>,
    pub dist: Option<EntryDist>,
    pub payload: Payload,
}

impl GameInstance {
    pub fn quadratic(game: QuadraticGame) -> Self {
        GameInstance {
            kind: GameKind::Quadratic,
            seed: None,
            dist: None,
            payload: Payload::Quadratic(game),
        }
    }

    pub fn blotto(game: BlottoGame) -> Self {
        GameInstance {
            kind: GameKind::Blotto,
            seed: None,
            dist: None,
            payload: Payload::Blotto(game),
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticGame> {
        match &self.payload {
            Payload::Quadratic(q) => Some(q),
            Payload::Blotto(_) => None,
        }
    }

    pub fn as_blotto(&self) -> Option<&BlottoGame> {
        match &self.payload {
            Payload::Blotto(b) => Some(b),
            Payload::Quadratic(_) => None,
        }
    }

    fn inner(&self) -> &dyn Game {
        match &self.payload {
            Payload::Quadratic(q) => q,
            Payload::Blotto(b) => b,
        }
    }

    pub fn to_document(&self) -> GameDocument {
        let (budgets, q, r) = match &self.payload {
            Payload::Quadratic(g) => (None, Some(g.q_rows()), Some(g.r().to_vec())),
            Payload::Blotto(g) => (Some(g.budgets().to_vec()), None, None),
        };
        GameDocument {
            kind: self.kind,
            seed: self.seed,
            dims: self.dims().to_vec(),
            budgets,
            dist_id: self.dist.map(|d| d.id().to_string()),
            q,
            r,
        }
    }

    pub fn from_document(doc: GameDocument) -> Result<Self> {
        let dist = doc.dist_id.as_deref().map(str::parse).transpose()?;
        let payload = match doc.kind {
            GameKind::Quadratic | GameKind::MultiQuadratic => {
                let q = doc.q.ok_or_else(|| Error::invalid("Q", "missing for quadratic game"))?;
                let r = doc.r.ok_or_else(|| Error::invalid("r", "missing for quadratic game"))?;
                Payload::Quadratic(QuadraticGame::from_rows(doc.dims, q, r)?)
            }
            GameKind::Blotto => {
                let b = doc
                    .budgets
                    .ok_or_else(|| Error::invalid("budgets", "missing for blotto game"))?;
                if b.len() != 2 {
                    return Err(Error::invalid("budgets", "expected two budgets"));
                }
                let game = BlottoGame::new(doc.dims.first().copied().unwrap_or(1).saturating_sub(1), b[0], b[1])?;
                if game.dims() != doc.dims.as_slice() {
                    return Err(Error::invalid("dims", "inconsistent with blotto battlefields"));
                }
                Payload::Blotto(game)
            }
        };
        Ok(GameInstance {
            kind: doc.kind,
            seed: doc.seed,
            dist,
            payload,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

impl Game for GameInstance {
    fn num_players(&self) -> usize {
        self.inner().num_players()
    }

    fn dims(&self) -> &[usize] {
        self.inner().dims()
    }

    fn cost(&self, i: usize, x: &[f64]) -> Result<f64> {
        self.inner().cost(i, x)
    }

    fn cost_grad(&self, i: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.inner().cost_grad(i, x)
    }

    fn cost_hvp(&self, i: usize, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        self.inner().cost_hvp(i, x, v)
    }
}

/// JSON form of a [`GameInstance`]. Matrices are nested row-major arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameDocument {
    pub kind: GameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist_id: Option<String>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<f64>>>,
}
