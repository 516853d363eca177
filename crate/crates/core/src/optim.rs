//! Heavy-ball gradient descent and the shared training loop.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::distributions::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::baselines::{gni_grad, gni_value, own_gradients, sga_direction};
use crate::error::{Error, Result};
use crate::games::Game;
use crate::mcgni::{mcgni_grad, mcgni_value, sample_profile_batch, snp_residual, McgniConfig, Profile};
use crate::pushforward::{init_generator_with, Architecture, GeneratorKind, OmegaBatch};
use crate::rng::{self, stream};
use crate::vecops;

/// Gradient norm above which a run is declared diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Local regret over pushforward generators.
    Mcgni,
    /// Gradient descent on the pure-strategy GNI function.
    GradGni,
    /// Symplectic gradient adjustment.
    Sga,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Mcgni, Method::GradGni, Method::Sga];

    pub fn id(self) -> &'static str {
        match self {
            Method::Mcgni => "mcgni",
            Method::GradGni => "gradgni",
            Method::Sga => "sga",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::invalid("method", format!("unknown method `{s}` (expected mcgni, gradgni or sga)")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Step size.
    pub rho: f64,
    /// Momentum.
    pub kappa: f64,
    pub iterations: usize,
    /// Local radius, batch sizes, gradient mode and eval seed. The radius and
    /// gradient mode also apply to the pure GNI baseline and to the regret
    /// reported for every method.
    pub mcgni: McgniConfig,
    pub generator: GeneratorKind,
    /// Latent dimension; `None` uses each player's action dimension.
    pub latent_dim: Option<usize>,
    pub lambda_sga: f64,
    pub fd_eps: f64,
    pub init_seed: u64,
    pub batch_seed: u64,
    /// Local regret is recorded every `regret_every` iterations (and always
    /// for the first and final rows).
    pub regret_every: usize,
    pub snp_every: usize,
    /// Record wall time per row. Off by default so artifacts are reproducible.
    pub timing: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::Mcgni,
            rho: 1e-2,
            kappa: 0.9,
            iterations: 2000,
            mcgni: McgniConfig::default(),
            generator: GeneratorKind::Net(Architecture::standard()),
            latent_dim: None,
            lambda_sga: 1.0,
            fd_eps: 1e-5,
            init_seed: 0,
            batch_seed: 0,
            regret_every: 1,
            snp_every: 50,
            timing: false,
        }
    }
}

impl SolverConfig {
    pub fn lambda(&self) -> f64 {
        self.mcgni.lambda
    }

    pub fn with_seeds(mut self, seed: u64) -> Self {
        self.init_seed = seed;
        self.batch_seed = seed;
        self.mcgni.eval_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.mcgni.validate()?;
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::invalid("rho", "must be positive and finite"));
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::invalid("kappa", "must lie in [0, 1)"));
        }
        if self.iterations == 0 {
            return Err(Error::invalid("iterations", "must be at least 1"));
        }
        if self.latent_dim == Some(0) {
            return Err(Error::invalid("latent_dim", "must be at least 1"));
        }
        if !self.lambda_sga.is_finite() {
            return Err(Error::invalid("lambda_sga", "must be finite"));
        }
        if !(self.fd_eps > 0.0 && self.fd_eps.is_finite()) {
            return Err(Error::invalid("fd_eps", "must be positive and finite"));
        }
        if self.regret_every == 0 {
            return Err(Error::invalid("regret_every", "must be at least 1"));
        }
        if self.snp_every == 0 {
            return Err(Error::invalid("snp_every", "must be at least 1"));
        }
        Ok(())
    }
}

/// The point being optimized.
#[derive(Clone, Debug, PartialEq)]
pub enum Iterate {
    Mixed(Profile),
    Pure(Vec<f64>),
}

impl Iterate {
    pub fn params(&self) -> Vec<f64> {
        match self {
            Iterate::Mixed(p) => p.flat_params(),
            Iterate::Pure(x) => x.clone(),
        }
    }

    fn set_params(&mut self, flat: &[f64]) -> Result<()> {
        match self {
            Iterate::Mixed(p) => *p = p.with_flat_params(flat)?,
            Iterate::Pure(x) => x.copy_from_slice(flat),
        }
        Ok(())
    }
}

/// One line of the per-iteration metrics log.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub iteration: usize,
    pub local_regret: Option<f64>,
    pub grad_norm: Option<f64>,
    pub snp_residual: Option<f64>,
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainState {
    pub iterate: Iterate,
    pub velocity: Vec<f64>,
    pub iteration: usize,
    pub history: Vec<MetricsRow>,
}

impl TrainState {
    pub fn new(iterate: Iterate) -> Self {
        let velocity = vec![0.0; iterate.params().len()];
        TrainState {
            iterate,
            velocity,
            iteration: 0,
            history: Vec::new(),
        }
    }

    /// Heavy-ball update `v <- kappa v + g`, `theta <- theta - rho v`.
    pub fn momentum_step(&mut self, gradient: &[f64], rho: f64, kappa: f64) -> Result<()> {
        let mut params = self.iterate.params();
        heavy_ball(&mut params, &mut self.velocity, gradient, rho, kappa)?;
        self.iterate.set_params(&params)?;
        self.iteration += 1;
        Ok(())
    }
}

/// Heavy-ball update on raw slices.
pub fn heavy_ball(params: &mut [f64], velocity: &mut [f64], gradient: &[f64], rho: f64, kappa: f64) -> Result<()> {
    if params.len() != gradient.len() || velocity.len() != gradient.len() {
        return Err(Error::DimensionMismatch {
            what: "momentum step",
            expected: params.len(),
            got: gradient.len(),
        });
    }
    for ((p, v), g) in params.iter_mut().zip(velocity.iter_mut()).zip(gradient) {
        *v = kappa * *v + g;
        *p -= rho * *v;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub state: TrainState,
    pub diverged: bool,
}

impl RunOutcome {
    pub fn metrics(&self) -> &[MetricsRow] {
        &self.state.history
    }

    /// Last finite local regret in the log.
    pub fn final_regret(&self) -> Option<f64> {
        last_finite_regret(&self.state.history)
    }
}

pub fn last_finite_regret(rows: &[MetricsRow]) -> Option<f64> {
    rows.iter().rev().find_map(|r| r.local_regret.filter(|v| v.is_finite()))
}

fn initial_iterate<G: Game + ?Sized>(config: &SolverConfig, game: &G) -> Iterate {
    let mut rng = rng::seeded(config.init_seed, stream::INIT);
    match config.method {
        Method::Mcgni => Iterate::Mixed(Profile::new(
            game.dims()
                .iter()
                .map(|&n| init_generator_with(&config.generator, config.latent_dim.unwrap_or(n), n, &mut rng))
                .collect(),
        )),
        Method::GradGni | Method::Sga => {
            let dist = Uniform::new(-0.5, 0.5);
            Iterate::Pure((0..game.total_dim()).map(|_| dist.sample(&mut rng)).collect())
        }
    }
}

// Numerical blow-ups surface as non-finite errors; they end the run instead
// of failing it.
fn is_blowup(err: &Error) -> bool {
    matches!(err, Error::NonFinite { .. } | Error::NonFiniteHvp { .. })
}

fn regret_at<G: Game + ?Sized>(
    iterate: &Iterate,
    game: &G,
    lambda: f64,
    eval: &[OmegaBatch],
) -> Result<f64> {
    let value = match iterate {
        Iterate::Mixed(p) => mcgni_value(p, game, lambda, eval).map(|(v, _)| v),
        Iterate::Pure(x) => gni_value(x, game, lambda),
    };
    match value {
        Err(e) if is_blowup(&e) => Ok(f64::NAN),
        other => other,
    }
}

fn residual_at<G: Game + ?Sized>(iterate: &Iterate, game: &G, eval: &[OmegaBatch]) -> Result<f64> {
    let value = match iterate {
        Iterate::Mixed(p) => snp_residual(p, game, eval),
        Iterate::Pure(x) => own_gradients(x, game).map(|g| vecops::norm_sq(&g)),
    };
    match value {
        Err(e) if is_blowup(&e) => Ok(f64::NAN),
        other => other,
    }
}

/// Starts from the configured seeds and iterates.
pub fn run<G: Game + ?Sized>(config: &SolverConfig, game: &G) -> Result<RunOutcome> {
    config.validate()?;
    run_from(config, game, initial_iterate(config, game))
}

/// Runs the configured method from a given starting point.
pub fn run_from<G: Game + ?Sized>(config: &SolverConfig, game: &G, start: Iterate) -> Result<RunOutcome> {
    config.validate()?;
    match (&start, config.method) {
        (Iterate::Mixed(p), Method::Mcgni) => p.check_game(game)?,
        (Iterate::Pure(x), Method::GradGni | Method::Sga) if x.len() == game.total_dim() => {}
        _ => {
            return Err(Error::invalid(
                "method",
                "starting point does not match the method's strategy type",
            ))
        }
    }
    let lambda = config.lambda();
    let eval = match &start {
        Iterate::Mixed(p) => {
            sample_profile_batch(&mut rng::seeded(config.mcgni.eval_seed, stream::EVAL), p, config.mcgni.eval_batch)
        }
        Iterate::Pure(_) => Vec::new(),
    };
    let mut batch_rng = rng::seeded(config.batch_seed, stream::BATCH);
    let mut state = TrainState::new(start);
    let clock = Instant::now();
    let elapsed = |on: bool| on.then(|| clock.elapsed().as_secs_f64() * 1e3);
    let mut diverged = false;

    for k in 0..config.iterations {
        let grad = match &state.iterate {
            Iterate::Mixed(p) => {
                let batch = sample_profile_batch(&mut batch_rng, p, config.mcgni.batch);
                mcgni_grad(p, game, &config.mcgni, &batch).map(|g| g.flat())
            }
            Iterate::Pure(x) => match config.method {
                Method::Sga => sga_direction(x, game, config.lambda_sga, config.fd_eps),
                _ => gni_grad(x, game, lambda, config.mcgni.grad_mode),
            },
        };
        let grad = match grad {
            Ok(g) => Some(g),
            Err(e) if is_blowup(&e) => None,
            Err(e) => return Err(e),
        };
        let grad_norm = grad.as_deref().map(vecops::norm).unwrap_or(f64::NAN);
        let blown = !(grad_norm <= DIVERGENCE_THRESHOLD);
        let record_regret = blown || k % config.regret_every == 0;
        let local_regret = record_regret
            .then(|| regret_at(&state.iterate, game, lambda, &eval))
            .transpose()?;
        let snp = (k % config.snp_every == 0)
            .then(|| residual_at(&state.iterate, game, &eval))
            .transpose()?;
        state.history.push(MetricsRow {
            iteration: k,
            local_regret,
            grad_norm: Some(grad_norm),
            snp_residual: snp,
            elapsed_ms: elapsed(config.timing),
        });
        if blown {
            diverged = true;
            break;
        }
        state.momentum_step(grad.as_deref().expect("finite gradient"), config.rho, config.kappa)?;
        if !vecops::all_finite(&state.iterate.params()) {
            diverged = true;
            break;
        }
    }

    if !diverged {
        let local_regret = Some(regret_at(&state.iterate, game, lambda, &eval)?);
        let snp = Some(residual_at(&state.iterate, game, &eval)?);
        state.history.push(MetricsRow {
            iteration: config.iterations,
            local_regret,
            grad_norm: None,
            snp_residual: snp,
            elapsed_ms: elapsed(config.timing),
        });
    }
    Ok(RunOutcome { state, diverged })
}

/// Running minimum of the squared gradient norm over the log.
pub fn running_min_grad_sq(metrics: &[MetricsRow]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    metrics
        .iter()
        .filter_map(|r| r.grad_norm)
        .map(|g| {
            best = best.min(g * g);
            best
        })
        .collect()
}

/// `min_k |grad_k|^2` over every row that carries a gradient norm.
pub fn min_grad_decay(metrics: &[MetricsRow]) -> Result<f64> {
    running_min_grad_sq(metrics)
        .last()
        .copied()
        .ok_or_else(|| Error::invalid("metrics", "no rows with a gradient norm"))
}
