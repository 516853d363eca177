//! Monte-Carlo estimators of the local regret over pushforward profiles.
//!
//! For a profile `g = (g_1, .., g_N)` and a frozen latent batch, `F_i` is the
//! sample mean of player `i`'s cost, `Gamma_i = d F_i / d theta_i`, and
//!
//! ```text
//! V_i = F_i(g) - F_i(g with theta_i <- theta_i - lambda * Gamma_i),   V = sum_i V_i
//! ```
//!
//! Every term of one call reuses the same batch (common random numbers), so
//! the difference stays well above the sampling noise even though `V` is of
//! order `lambda * |Gamma|^2`.

use ndarray::{s, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{fd_step, Game};
use crate::pushforward::{sample_omega, BatchForward, Generator, OmegaBatch};
use crate::rng::SolverRng;
use crate::vecops;

/// One generator per player.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub generators: Vec<Generator>,
}

impl Profile {
    pub fn new(generators: Vec<Generator>) -> Self {
        Profile { generators }
    }

    /// Dirac profile placing each player at the matching slice of `x`.
    pub fn constant_at<G: Game + ?Sized>(game: &G, x: &[f64], d: usize) -> Result<Self> {
        if x.len() != game.total_dim() {
            return Err(Error::DimensionMismatch {
                what: "joint action",
                expected: game.total_dim(),
                got: x.len(),
            });
        }
        Ok(Profile {
            generators: (0..game.num_players())
                .map(|k| Generator::constant(d, x[game.block(k)].to_vec()))
                .collect(),
        })
    }

    pub fn num_players(&self) -> usize {
        self.generators.len()
    }

    pub fn all_constant(&self) -> bool {
        self.generators.iter().all(Generator::is_constant)
    }

    pub fn param_lens(&self) -> Vec<usize> {
        self.generators.iter().map(Generator::param_len).collect()
    }

    pub fn flat_params(&self) -> Vec<f64> {
        self.generators.iter().flat_map(|g| g.params().iter().copied()).collect()
    }

    pub fn with_flat_params(&self, flat: &[f64]) -> Result<Self> {
        let total: usize = self.param_lens().iter().sum();
        if flat.len() != total {
            return Err(Error::DimensionMismatch {
                what: "profile parameters",
                expected: total,
                got: flat.len(),
            });
        }
        let mut off = 0;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let len = g.param_len();
                let next = g.with_params(flat[off..off + len].to_vec());
                off += len;
                next
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile { generators })
    }

    pub fn check_game<G: Game + ?Sized>(&self, game: &G) -> Result<()> {
        if self.num_players() != game.num_players() {
            return Err(Error::DimensionMismatch {
                what: "profile players",
                expected: game.num_players(),
                got: self.num_players(),
            });
        }
        for (gen, &dim) in self.generators.iter().zip(game.dims()) {
            if gen.action_dim() != dim {
                return Err(Error::DimensionMismatch {
                    what: "generator output",
                    expected: dim,
                    got: gen.action_dim(),
                });
            }
        }
        Ok(())
    }
}

/// Draws one latent batch of `size` samples for every player of `profile`.
pub fn sample_profile_batch(rng: &mut SolverRng, profile: &Profile, size: usize) -> Vec<OmegaBatch> {
    profile
        .generators
        .iter()
        .map(|g| sample_omega(rng, size, g.latent_dim()))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradMode {
    /// Chain rule through the inner shift, including the Hessian-vector term.
    #[default]
    Exact,
    /// Drops the Hessian-vector term.
    FirstOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McgniConfig {
    pub lambda: f64,
    pub batch: usize,
    pub grad_mode: GradMode,
    /// Relative step for finite-difference Hessian-vector products.
    pub hvp_eps: f64,
    pub eval_batch: usize,
    pub eval_seed: u64,
}

impl Default for McgniConfig {
    fn default() -> Self {
        McgniConfig {
            lambda: 1e-3,
            batch: 128,
            grad_mode: GradMode::Exact,
            hvp_eps: 1e-4,
            eval_batch: 1024,
            eval_seed: 0,
        }
    }
}

impl McgniConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid("lambda", "must be positive and finite"));
        }
        if self.batch == 0 {
            return Err(Error::invalid("batch", "must be at least 1"));
        }
        if self.eval_batch == 0 {
            return Err(Error::invalid("eval_batch", "must be at least 1"));
        }
        if !(self.hvp_eps > 0.0 && self.hvp_eps.is_finite()) {
            return Err(Error::invalid("hvp_eps", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Parameter gradient of the sampled local regret.
#[derive(Clone, Debug, PartialEq)]
pub struct GradEstimate {
    /// One block per player, aligned with that player's flat parameters.
    pub blocks: Vec<Vec<f64>>,
    /// Sampled `V` on the same batch.
    pub value: f64,
    /// Sampled `V_i`.
    pub per_player: Vec<f64>,
}

impl GradEstimate {
    pub fn flat(&self) -> Vec<f64> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| vecops::norm_sq(b)).sum::<f64>().sqrt()
    }
}

// Latent rows actually evaluated. With Dirac strategies every row produces
// the same joint action, so one row is enough and results do not depend on B.
fn latent_views<'a, G: Game + ?Sized>(
    profile: &Profile,
    game: &G,
    batch: &'a [OmegaBatch],
) -> Result<Vec<ArrayView2<'a, f64>>> {
    profile.check_game(game)?;
    if batch.len() != profile.num_players() {
        return Err(Error::BatchMismatch(format!(
            "{} latent batches for {} players",
            batch.len(),
            profile.num_players()
        )));
    }
    let rows = batch[0].len();
    for (k, (b, g)) in batch.iter().zip(&profile.generators).enumerate() {
        if b.len() != rows {
            return Err(Error::BatchMismatch(format!(
                "player {k} has {} samples, player 0 has {rows}",
                b.len()
            )));
        }
        if b.dim() != g.latent_dim() {
            return Err(Error::DimensionMismatch {
                what: "latent batch",
                expected: g.latent_dim(),
                got: b.dim(),
            });
        }
    }
    let keep = if profile.all_constant() { 1 } else { rows };
    Ok(batch.iter().map(|b| b.samples().slice_move(s![..keep, ..])).collect())
}

fn forward_all(profile: &Profile, views: &[ArrayView2<'_, f64>]) -> Result<Vec<BatchForward>> {
    profile
        .generators
        .iter()
        .zip(views)
        .map(|(g, v)| g.forward_batch(*v))
        .collect()
}

fn fill_joint(fwds: &[&BatchForward], b: usize, x: &mut Vec<f64>) {
    x.clear();
    for f in fwds {
        x.extend(f.actions().row(b).iter().copied());
    }
}

fn mean_cost<G: Game + ?Sized>(game: &G, i: usize, fwds: &[&BatchForward]) -> Result<f64> {
    let rows = fwds[0].actions().nrows();
    let mut x = Vec::with_capacity(game.total_dim());
    let mut total = 0.0;
    for b in 0..rows {
        fill_joint(fwds, b, &mut x);
        total += game.cost(i, &x)?;
    }
    Ok(total / rows as f64)
}

// Sample-mean gradient of player i's cost with respect to the parameters of
// every player selected by `want`; unselected blocks are left empty.
fn grad_blocks<G: Game + ?Sized>(
    game: &G,
    i: usize,
    gens: &[&Generator],
    views: &[ArrayView2<'_, f64>],
    fwds: &[&BatchForward],
    want: impl Fn(usize) -> bool,
) -> Result<Vec<Vec<f64>>> {
    let rows = fwds[0].actions().nrows();
    let players = gens.len();
    let mut upstream: Vec<Array2<f64>> = (0..players)
        .map(|k| Array2::zeros((if want(k) { rows } else { 0 }, game.dims()[k])))
        .collect();
    let inv = 1.0 / rows as f64;
    let mut x = Vec::with_capacity(game.total_dim());
    for b in 0..rows {
        fill_joint(fwds, b, &mut x);
        let g = game.cost_grad(i, &x)?;
        for (k, up) in upstream.iter_mut().enumerate() {
            if want(k) {
                for (dst, src) in up.row_mut(b).iter_mut().zip(&g[game.block(k)]) {
                    *dst = src * inv;
                }
            }
        }
    }
    (0..players)
        .map(|k| {
            if want(k) {
                gens[k].vjp_batch(views[k], fwds[k], upstream[k].view())
            } else {
                Ok(Vec::new())
            }
        })
        .collect()
}

/// Sample mean of player `i`'s cost under the profile.
pub fn estimate_f<G: Game + ?Sized>(profile: &Profile, game: &G, i: usize, batch: &[OmegaBatch]) -> Result<f64> {
    let views = latent_views(profile, game, batch)?;
    check_player(game, i)?;
    let fwds = forward_all(profile, &views)?;
    mean_cost(game, i, &fwds.iter().collect::<Vec<_>>())
}

/// Sample-mean parameter gradient of `F_i`, one block per player.
pub fn estimate_grad_f<G: Game + ?Sized>(
    profile: &Profile,
    game: &G,
    i: usize,
    batch: &[OmegaBatch],
) -> Result<Vec<Vec<f64>>> {
    let views = latent_views(profile, game, batch)?;
    check_player(game, i)?;
    let fwds = forward_all(profile, &views)?;
    let gens: Vec<&Generator> = profile.generators.iter().collect();
    grad_blocks(game, i, &gens, &views, &fwds.iter().collect::<Vec<_>>(), |_| true)
}

fn check_player<G: Game + ?Sized>(game: &G, i: usize) -> Result<()> {
    if i >= game.num_players() {
        return Err(Error::PlayerOutOfRange {
            index: i,
            players: game.num_players(),
        });
    }
    Ok(())
}

/// Sampled local regret `V` and its per-player terms `V_i`.
pub fn mcgni_value<G: Game + ?Sized>(
    profile: &Profile,
    game: &G,
    lambda: f64,
    batch: &[OmegaBatch],
) -> Result<(f64, Vec<f64>)> {
    let views = latent_views(profile, game, batch)?;
    let fwds = forward_all(profile, &views)?;
    let gens: Vec<&Generator> = profile.generators.iter().collect();
    let base: Vec<&BatchForward> = fwds.iter().collect();
    let mut per_player = Vec::with_capacity(game.num_players());
    for i in 0..game.num_players() {
        let f0 = mean_cost(game, i, &base)?;
        let gamma = grad_blocks(game, i, &gens, &views, &base, |k| k == i)?.swap_remove(i);
        let shifted = gens[i].axpy_params(&gamma, -lambda)?;
        let shifted_fwd = shifted.forward_batch(views[i])?;
        let mut moved = base.clone();
        moved[i] = &shifted_fwd;
        per_player.push(f0 - mean_cost(game, i, &moved)?);
    }
    Ok((per_player.iter().sum(), per_player))
}

/// Parameter gradient of the sampled local regret on one frozen batch.
///
/// For each player, with `T_i` the inner shift and `w = grad F_i(T_i(theta))`,
/// the contribution is `grad F_i(theta) - w + lambda * H_i (w restricted to
/// block i)`; in [`GradMode::FirstOrder`] the Hessian term is dropped.
pub fn mcgni_grad<G: Game + ?Sized>(
    profile: &Profile,
    game: &G,
    config: &McgniConfig,
    batch: &[OmegaBatch],
) -> Result<GradEstimate> {
    let views = latent_views(profile, game, batch)?;
    let lambda = config.lambda;
    let fwds = forward_all(profile, &views)?;
    let gens: Vec<&Generator> = profile.generators.iter().collect();
    let base: Vec<&BatchForward> = fwds.iter().collect();
    let theta_norm = profile
        .generators
        .iter()
        .map(|g| vecops::norm_sq(g.params()))
        .sum::<f64>()
        .sqrt();

    let mut blocks: Vec<Vec<f64>> = profile.generators.iter().map(|g| vec![0.0; g.param_len()]).collect();
    let mut per_player = Vec::with_capacity(game.num_players());

    for i in 0..game.num_players() {
        let f0 = mean_cost(game, i, &base)?;
        let grad0 = grad_blocks(game, i, &gens, &views, &base, |_| true)?;

        let shifted = gens[i].axpy_params(&grad0[i], -lambda)?;
        let shifted_fwd = shifted.forward_batch(views[i])?;
        let mut moved = base.clone();
        moved[i] = &shifted_fwd;
        let mut moved_gens = gens.clone();
        moved_gens[i] = &shifted;
        per_player.push(f0 - mean_cost(game, i, &moved)?);
        let w = grad_blocks(game, i, &moved_gens, &views, &moved, |_| true)?;

        for ((acc, g0), wk) in blocks.iter_mut().zip(&grad0).zip(&w) {
            vecops::axpy(1.0, g0, acc);
            vecops::axpy(-1.0, wk, acc);
        }

        if config.grad_mode == GradMode::Exact {
            let u = &w[i];
            let u_norm = vecops::norm(u);
            if u_norm > 0.0 {
                let eps = fd_step(config.hvp_eps, theta_norm, u_norm);
                let probe = |scale: f64| -> Result<Vec<Vec<f64>>> {
                    let gen = gens[i].axpy_params(u, scale)?;
                    let fwd = gen.forward_batch(views[i])?;
                    let mut f = base.clone();
                    f[i] = &fwd;
                    let mut g = gens.clone();
                    g[i] = &gen;
                    grad_blocks(game, i, &g, &views, &f, |_| true)
                };
                let plus = probe(eps)?;
                let minus = probe(-eps)?;
                for ((acc, p), m) in blocks.iter_mut().zip(&plus).zip(&minus) {
                    for ((a, pv), mv) in acc.iter_mut().zip(p).zip(m) {
                        let hv = (pv - mv) / (2.0 * eps);
                        if !hv.is_finite() {
                            return Err(Error::NonFiniteHvp { player: i });
                        }
                        *a += lambda * hv;
                    }
                }
            }
        }
    }

    Ok(GradEstimate {
        blocks,
        value: per_player.iter().sum(),
        per_player,
    })
}

/// Central-difference Hessian-vector product of a gradient map:
/// `[grad(theta + eps v) - grad(theta - eps v)] / (2 eps)` with
/// `eps = eps0 (1 + |theta|) / |v|`.
pub fn fd_hvp<F>(gradfn: F, theta: &[f64], v: &[f64], eps0: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if theta.len() != v.len() {
        return Err(Error::DimensionMismatch {
            what: "HVP direction",
            expected: theta.len(),
            got: v.len(),
        });
    }
    let v_norm = vecops::norm(v);
    if v_norm == 0.0 {
        return Ok(vec![0.0; theta.len()]);
    }
    let eps = fd_step(eps0, vecops::norm(theta), v_norm);
    let plus = gradfn(&vecops::add_scaled(theta, eps, v))?;
    let minus = gradfn(&vecops::add_scaled(theta, -eps, v))?;
    let out: Vec<f64> = plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * eps)).collect();
    if !vecops::all_finite(&out) {
        return Err(Error::NonFinite { what: "finite-difference HVP" });
    }
    Ok(out)
}

/// Inner samples used per outer sample in [`snp_residual`].
pub const SNP_INNER_SAMPLES: usize = 64;

/// Stationary-Nash residual `sum_i E_{omega_i} |E_{omega_-i}[grad_i f_i]|^2`.
///
/// The inner expectation for outer sample `b` averages over up to
/// [`SNP_INNER_SAMPLES`] other samples `c != b` of the opponents, which avoids
/// the upward bias of squaring a single-sample gradient.
pub fn snp_residual<G: Game + ?Sized>(profile: &Profile, game: &G, batch: &[OmegaBatch]) -> Result<f64> {
    let views = latent_views(profile, game, batch)?;
    let rows = views[0].nrows();
    if !profile.all_constant() && rows < 2 {
        return Err(Error::BatchMismatch(
            "residual needs at least two samples with non-Dirac strategies".into(),
        ));
    }
    let fwds = forward_all(profile, &views)?;
    let players = game.num_players();
    let mut x = vec![0.0; game.total_dim()];
    let mut total = 0.0;
    for i in 0..players {
        let own = game.block(i);
        let mut acc = 0.0;
        for b in 0..rows {
            let inner: Vec<usize> = if players == 1 || rows == 1 {
                vec![b]
            } else {
                (0..rows).filter(|&c| c != b).take(SNP_INNER_SAMPLES).collect()
            };
            let mut mean = vec![0.0; own.len()];
            for &c in &inner {
                for k in 0..players {
                    let row = if k == i { b } else { c };
                    x[game.block(k)]
                        .iter_mut()
                        .zip(fwds[k].actions().row(row))
                        .for_each(|(dst, src)| *dst = *src);
                }
                let g = game.cost_grad(i, &x)?;
                vecops::axpy(1.0 / inner.len() as f64, &g[own.clone()], &mut mean);
            }
            acc += vecops::norm_sq(&mean);
        }
        total += acc / rows as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use ndarray::Array2;

    use super::*;
    use crate::games::{gen_quadratic, EntryDist, QuadraticGame};
    use crate::pushforward::{init_generator, Activation, Architecture, GeneratorKind};
    use crate::rng;

    fn square_game() -> QuadraticGame {
        QuadraticGame::new(vec![1], vec![Array2::eye(1)], vec![vec![0.0]]).unwrap()
    }

    fn dirac(c: f64) -> Profile {
        Profile::new(vec![Generator::constant(1, vec![c])])
    }

    fn batch_of(size: usize, profile: &Profile, seed: u64) -> Vec<OmegaBatch> {
        sample_profile_batch(&mut rng::seeded(seed, rng::stream::BATCH), profile, size)
    }

    fn small_net_profile(game: &QuadraticGame, seed: u64) -> Profile {
        let arch = Architecture::new(vec![5], vec![Activation::Tanh]).unwrap();
        let mut r = rng::seeded(seed, rng::stream::INIT);
        Profile::new(
            game.dims()
                .iter()
                .map(|&n| crate::pushforward::init_generator_with(&GeneratorKind::Net(arch.clone()), 2, n, &mut r))
                .collect(),
        )
    }

    #[test]
    fn dirac_square_value_and_gradient() {
        let g = square_game();
        let p = dirac(1.0);
        let batch = batch_of(4, &p, 0);
        assert_eq!(estimate_f(&p, &g, 0, &batch).unwrap(), 1.0);
        assert_eq!(estimate_grad_f(&p, &g, 0, &batch).unwrap(), vec![vec![2.0]]);
        let (v, vi) = mcgni_value(&p, &g, 0.1, &batch).unwrap();
        assert!((v - 0.36).abs() < 1e-15, "{v}");
        assert_eq!(vi.len(), 1);
        let cfg = McgniConfig {
            lambda: 0.1,
            ..McgniConfig::default()
        };
        let est = mcgni_grad(&p, &g, &cfg, &batch).unwrap();
        assert!((est.blocks[0][0] - 0.72).abs() < 1e-6, "{:?}", est.blocks);
        assert!((est.value - 0.36).abs() < 1e-15);
        assert!((snp_residual(&p, &g, &batch).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn dirac_results_do_not_depend_on_batch_size() {
        let game = gen_quadratic(3, 2, EntryDist::Uniform01);
        let x = [0.1, -0.2, 0.3, 0.05];
        let p = Profile::constant_at(&game, &x, 2).unwrap();
        let small = batch_of(1, &p, 1);
        let large = batch_of(1024, &p, 2);
        let cfg = McgniConfig::default();
        assert_eq!(mcgni_value(&p, &game, 1e-3, &small).unwrap(), mcgni_value(&p, &game, 1e-3, &large).unwrap());
        assert_eq!(mcgni_grad(&p, &game, &cfg, &small).unwrap(), mcgni_grad(&p, &game, &cfg, &large).unwrap());
    }

    #[test]
    fn dirac_gradient_is_cost_gradient_slice() {
        let game = gen_quadratic(5, 2, EntryDist::Uniform01);
        let x = [0.4, -0.3, 0.2, 0.7];
        let p = Profile::constant_at(&game, &x, 1).unwrap();
        let batch = batch_of(3, &p, 0);
        for i in 0..2 {
            let blocks = estimate_grad_f(&p, &game, i, &batch).unwrap();
            let full = game.cost_grad(i, &x).unwrap();
            assert_eq!(blocks.concat(), full);
        }
    }

    #[test]
    fn zero_gamma_gives_zero_value_and_gradient() {
        let g = square_game();
        let p = dirac(0.0);
        let batch = batch_of(2, &p, 0);
        assert_eq!(mcgni_value(&p, &g, 1e-3, &batch).unwrap().0, 0.0);
        for mode in [GradMode::Exact, GradMode::FirstOrder] {
            let cfg = McgniConfig {
                grad_mode: mode,
                ..McgniConfig::default()
            };
            assert_eq!(mcgni_grad(&p, &g, &cfg, &batch).unwrap().blocks, vec![vec![0.0]]);
        }
    }

    #[test]
    fn grad_f_matches_finite_differences_for_nets() {
        let game = gen_quadratic(8, 2, EntryDist::Uniform01);
        let p = small_net_profile(game.as_quadratic().unwrap(), 4);
        let batch = batch_of(16, &p, 5);
        let theta = p.flat_params();
        for i in 0..2 {
            let got = estimate_grad_f(&p, &game, i, &batch).unwrap().concat();
            let h = 1e-6;
            let want: Vec<f64> = (0..theta.len())
                .map(|k| {
                    let mut tp = theta.clone();
                    let mut tm = theta.clone();
                    tp[k] += h;
                    tm[k] -= h;
                    let fp = estimate_f(&p.with_flat_params(&tp).unwrap(), &game, i, &batch).unwrap();
                    let fm = estimate_f(&p.with_flat_params(&tm).unwrap(), &game, i, &batch).unwrap();
                    (fp - fm) / (2.0 * h)
                })
                .collect();
            let err = vecops::max_rel_err(&got, &want, 1e-12);
            assert!(err < 1e-5, "player {i}: {err}");
        }
    }

    #[test]
    fn exact_gradient_matches_finite_differences_of_value() {
        let game = gen_quadratic(9, 2, EntryDist::Uniform01);
        let p = small_net_profile(game.as_quadratic().unwrap(), 6);
        let batch = batch_of(8, &p, 7);
        let cfg = McgniConfig {
            lambda: 0.05,
            ..McgniConfig::default()
        };
        let got = mcgni_grad(&p, &game, &cfg, &batch).unwrap().flat();
        let theta = p.flat_params();
        let h = 1e-5;
        let want: Vec<f64> = (0..theta.len())
            .map(|k| {
                let mut tp = theta.clone();
                let mut tm = theta.clone();
                tp[k] += h;
                tm[k] -= h;
                let vp = mcgni_value(&p.with_flat_params(&tp).unwrap(), &game, cfg.lambda, &batch).unwrap().0;
                let vm = mcgni_value(&p.with_flat_params(&tm).unwrap(), &game, cfg.lambda, &batch).unwrap().0;
                (vp - vm) / (2.0 * h)
            })
            .collect();
        let err = vecops::max_rel_err(&got, &want, 1e-12);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn fd_hvp_on_linear_and_quadratic_maps() {
        let a = [[2.0, -1.0], [0.5, 3.0]];
        let lin = |t: &[f64]| -> Result<Vec<f64>> {
            Ok(vec![a[0][0] * t[0] + a[0][1] * t[1], a[1][0] * t[0] + a[1][1] * t[1]])
        };
        let out = fd_hvp(lin, &[0.3, -0.7], &[1.0, 2.0], 1e-4).unwrap();
        assert!((out[0] - 0.0).abs() < 1e-9 && (out[1] - 6.5).abs() < 1e-9, "{out:?}");
        assert_eq!(fd_hvp(lin, &[0.3, -0.7], &[0.0, 0.0], 1e-4).unwrap(), vec![0.0, 0.0]);

        let game = gen_quadratic(2, 2, EntryDist::Uniform01);
        let q = game.as_quadratic().unwrap();
        let v = [0.3, -0.1, 0.2, 0.9];
        let want = q.hessians()[0].dot(&ndarray::ArrayView1::from(&v[..])).to_vec();
        let got = fd_hvp(|t| game.cost_grad(0, t), &[1.0, 2.0, -1.0, 0.5], &v, 1e-4).unwrap();
        assert!(vecops::max_rel_err(&got, &want, 1e-12) < 1e-8);
    }

    #[test]
    fn residual_requires_two_samples_for_nets() {
        let game = gen_quadratic(1, 2, EntryDist::Uniform01);
        let p = small_net_profile(game.as_quadratic().unwrap(), 0);
        let batch = batch_of(1, &p, 0);
        assert!(matches!(snp_residual(&p, &game, &batch), Err(Error::BatchMismatch(_))));
    }

    #[test]
    fn mismatched_batches_are_rejected() {
        let game = gen_quadratic(1, 2, EntryDist::Uniform01);
        let p = small_net_profile(game.as_quadratic().unwrap(), 0);
        let mut batch = batch_of(4, &p, 0);
        batch[1] = sample_omega(&mut rng::seeded(0, 0), 5, 2);
        assert!(matches!(estimate_f(&p, &game, 0, &batch), Err(Error::BatchMismatch(_))));
    }

    #[test]
    fn net_estimate_f_matches_brute_force() {
        let g = square_game();
        let arch = Architecture::new(vec![8, 8], vec![Activation::Tanh, Activation::Relu]).unwrap();
        let gen = init_generator(&GeneratorKind::Net(arch), 1, 1, 3);
        let p = Profile::new(vec![gen.clone()]);
        // Brute-force reference with an independent per-sample loop.
        let mut r = rng::seeded(77, 0);
        let reference = sample_omega(&mut r, 1_000_000, 1);
        let vals: Vec<f64> = reference
            .samples()
            .rows()
            .into_iter()
            .map(|w| gen.forward(&[w[0]]).unwrap()[0].powi(2))
            .collect();
        let ref_mean = vals.iter().sum::<f64>() / vals.len() as f64;

        let batch = batch_of(100_000, &p, 3);
        let est = estimate_f(&p, &g, 0, &batch).unwrap();
        let outputs: Vec<f64> = batch[0]
            .samples()
            .rows()
            .into_iter()
            .map(|w| gen.forward(&[w[0]]).unwrap()[0].powi(2))
            .collect();
        let var = outputs.iter().map(|v| (v - est).powi(2)).sum::<f64>() / (outputs.len() - 1) as f64;
        let se = (var / 1e5 + var / 1e6).sqrt();
        assert!((est - ref_mean).abs() < 3.0 * se, "{est} vs {ref_mean} (se {se})");
    }
}
