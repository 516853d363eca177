//! Fast numerical self-checks behind `mcgni check`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use rand::Rng;

use crate::baselines::{gni_grad, gni_value};
use crate::error::Result;
use crate::games::{gen_quadratic, EntryDist, Game, QuadraticGame};
use crate::mcgni::{mcgni_grad, mcgni_value, sample_profile_batch, GradMode, McgniConfig, Profile};
use crate::optim::{run, SolverConfig};
use crate::pushforward::{init_generator_with, Activation, Architecture, Generator, GeneratorKind};
use crate::rng::{self, SolverRng};
use crate::vecops;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {:<22} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn small_arch() -> Architecture {
    Architecture::new(vec![6, 5], vec![Activation::Tanh, Activation::Relu]).expect("valid architecture")
}

// The Hessian-vector probe in the MC-GNI gradient takes steps of about
// 1e-4 and can straddle a ReLU kink, where finite differences are no oracle.
fn smooth_arch() -> Architecture {
    Architecture::new(vec![6, 5], vec![Activation::Tanh, Activation::Tanh]).expect("valid architecture")
}

fn central_diff(f: impl Fn(&[f64]) -> Result<f64>, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        probe[k] = x[k] + h;
        let up = f(&probe)?;
        probe[k] = x[k] - h;
        let down = f(&probe)?;
        probe[k] = x[k];
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}

fn uniform_vec(rng: &mut SolverRng, n: usize, half_width: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-half_width..half_width)).collect()
}

/// Compares `vjp` against central differences of `upstream . g(omega)`.
/// Returns the worst relative error over `cases` random draws.
pub fn vjp_gradcheck<F>(vjp: F, cases: usize, seed: u64) -> Result<f64>
where
    F: Fn(&Generator, &[f64], &[f64]) -> Result<Vec<f64>>,
{
    let mut r = rng::seeded(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let g = init_generator_with(&GeneratorKind::Net(small_arch()), 2, 3, &mut r);
        let omega: Vec<f64> = (0..2).map(|_| r.gen()).collect();
        let upstream = uniform_vec(&mut r, 3, 1.0);
        let got = vjp(&g, &omega, &upstream)?;
        let want = central_diff(
            |theta| {
                let y = g.with_params(theta.to_vec())?.forward(&omega)?;
                Ok(vecops::dot(&y, &upstream))
            },
            g.params(),
            1e-6,
        )?;
        worst = worst.max(vecops::max_rel_err(&got, &want, 1e-8));
    }
    Ok(worst)
}

fn mcgni_gradcheck(cases: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for seed in 0..cases {
        let game = gen_quadratic(seed, 2, EntryDist::Uniform01);
        let mut r = rng::seeded(seed, 1);
        let kind = GeneratorKind::Net(smooth_arch());
        let profile = Profile::new(game.dims().iter().map(|&n| init_generator_with(&kind, n, n, &mut r)).collect());
        let batch = sample_profile_batch(&mut r, &profile, 8);
        let config = McgniConfig {
            lambda: 0.05,
            ..McgniConfig::default()
        };
        let got = mcgni_grad(&profile, &game, &config, &batch)?.flat();
        let want = central_diff(
            |theta| Ok(mcgni_value(&profile.with_flat_params(theta)?, &game, config.lambda, &batch)?.0),
            &profile.flat_params(),
            1e-5,
        )?;
        worst = worst.max(vecops::max_rel_err(&got, &want, 1e-10));
    }
    Ok(worst)
}

fn gni_gradcheck(cases: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for seed in 0..cases {
        let game = gen_quadratic(seed, 3, EntryDist::Uniform01);
        let x = uniform_vec(&mut rng::seeded(seed, 1), game.total_dim(), 0.5);
        let got = gni_grad(&x, &game, 0.05, GradMode::Exact)?;
        let want = central_diff(|y| gni_value(y, &game, 0.05), &x, 1e-5)?;
        worst = worst.max(vecops::max_rel_err(&got, &want, 1e-12));
    }
    Ok(worst)
}

/// Range of `V_i / (lambda |Gamma_i|^2)` over random Dirac profiles with
/// `lambda = 1 / (2 L_f)`, plus the smallest `V` seen.
pub fn sandwich_ratios(cases: u64, seed: u64) -> Result<(f64, f64, f64)> {
    let (mut lo, mut hi, mut min_v) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    for c in 0..cases {
        let game = gen_quadratic(seed.wrapping_add(c), 3, EntryDist::Uniform01);
        let lambda = 0.5 / game.as_quadratic().expect("quadratic").gradient_lipschitz();
        let x = uniform_vec(&mut rng::seeded(seed.wrapping_add(c), 1), game.total_dim(), 1.0);
        let profile = Profile::constant_at(&game, &x, 1)?;
        let batch = sample_profile_batch(&mut rng::seeded(0, 0), &profile, 1);
        let (v, per_player) = mcgni_value(&profile, &game, lambda, &batch)?;
        min_v = min_v.min(v);
        for (i, vi) in per_player.iter().enumerate() {
            let gamma_sq = vecops::norm_sq(&game.cost_grad(i, &x)?[game.block(i)]);
            if gamma_sq > 0.0 {
                let ratio = vi / (lambda * gamma_sq);
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
    }
    Ok((lo, hi, min_v))
}

fn reduction_error(cases: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for seed in 0..cases {
        let game = gen_quadratic(seed, 3, EntryDist::Uniform01);
        let x = uniform_vec(&mut rng::seeded(seed, 1), game.total_dim(), 0.5);
        let profile = Profile::constant_at(&game, &x, 3)?;
        let batch = sample_profile_batch(&mut rng::seeded(seed, 2), &profile, 4);
        let (v, _) = mcgni_value(&profile, &game, 1e-3, &batch)?;
        let want = gni_value(&x, &game, 1e-3)?;
        worst = worst.max((v - want).abs() / want.abs().max(1e-300));
        let g = mcgni_grad(&profile, &game, &McgniConfig::default(), &batch)?.flat();
        worst = worst.max(vecops::max_rel_err(&g, &gni_grad(&x, &game, 1e-3, GradMode::Exact)?, 1e-300));
    }
    Ok(worst)
}

/// Convex one-player quadratic `x^T Q x + r^T x` with `Q = A^T A / n + I`.
pub fn convex_quadratic(seed: u64, n: usize) -> (QuadraticGame, Vec<f64>) {
    let mut r = rng::seeded(seed, 0);
    let a = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    let q = a.transpose() * &a / n as f64 + DMatrix::identity(n, n);
    let rv = DVector::from_fn(n, |_, _| r.gen_range(-1.0..1.0));
    let x_star = -(&q + q.transpose()).lu().solve(&rv).expect("positive definite");
    let q_nd = Array2::from_shape_fn((n, n), |(i, j)| q[(i, j)]);
    let game = QuadraticGame::new(vec![n], vec![q_nd], vec![rv.iter().copied().collect()]).expect("valid shapes");
    (game, x_star.iter().copied().collect())
}

fn oracle_distance(cases: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for seed in 0..cases {
        let (game, x_star) = convex_quadratic(seed, 3);
        let config = SolverConfig {
            generator: GeneratorKind::Constant,
            mcgni: McgniConfig {
                lambda: 0.1,
                batch: 1,
                eval_batch: 1,
                ..McgniConfig::default()
            },
            ..SolverConfig::default()
        };
        let x = run(&config, &game)?.state.iterate.params();
        let diff: Vec<f64> = x.iter().zip(&x_star).map(|(a, b)| a - b).collect();
        worst = worst.max(vecops::norm(&diff));
    }
    Ok(worst)
}

/// Runs every check with the production `vjp_params`.
pub fn selfcheck() -> CheckReport {
    selfcheck_with(|g, omega, upstream| g.vjp_params(omega, upstream))
}

/// Runs every check, using `vjp` in the generator gradient check.
pub fn selfcheck_with<F>(vjp: F) -> CheckReport
where
    F: Fn(&Generator, &[f64], &[f64]) -> Result<Vec<f64>>,
{
    let tol = |name: &'static str, err: Result<f64>, limit: f64| {
        check(name, err.map(|e| (e < limit, format!("max rel. err {e:.3e} (limit {limit:.0e})"))))
    };
    let checks = vec![
        tol("gradcheck vjp_params", vjp_gradcheck(vjp, 20, 0), 1e-6),
        tol("gradcheck mcgni_grad", mcgni_gradcheck(10), 1e-4),
        tol("gradcheck gni_grad", gni_gradcheck(20), 1e-6),
        check(
            "sandwich bound",
            sandwich_ratios(100, 0).map(|(lo, hi, min_v)| {
                (
                    lo >= 0.5 - 1e-9 && hi <= 1.5 + 1e-9 && min_v >= 0.0,
                    format!("V_i/(lambda |Gamma_i|^2) in [{lo:.4}, {hi:.4}] (bounds [0.5, 1.5]), min V {min_v:.3e}"),
                )
            }),
        ),
        tol("pure-strategy reduction", reduction_error(20), 1e-8),
        check(
            "closed-form optimum",
            oracle_distance(5).map(|d| (d < 1e-3, format!("max |x - x*| {d:.3e} (limit 1e-3)"))),
        ),
    ];
    CheckReport { checks }
}
