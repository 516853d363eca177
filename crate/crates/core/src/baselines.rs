//! Pure-strategy baselines on the joint action vector: gradient descent on
//! the GNI function and symplectic gradient adjustment (SGA).

use crate::error::{Error, Result};
use crate::games::Game;
use crate::mcgni::GradMode;
use crate::vecops;

fn ensure_finite(v: &[f64], what: &'static str) -> Result<()> {
    if vecops::all_finite(v) {
        Ok(())
    } else {
        Err(Error::NonFinite { what })
    }
}

// x with player i's block moved along -lambda * grad_i.
fn shifted<G: Game + ?Sized>(game: &G, i: usize, x: &[f64], grad: &[f64], lambda: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    let block = game.block(i);
    vecops::axpy(-lambda, &grad[block.clone()], &mut y[block]);
    y
}

/// `sum_i f_i(x) - f_i(x_i - lambda * grad_i f_i(x), x_-i)`.
pub fn gni_value<G: Game + ?Sized>(x: &[f64], game: &G, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    let mut total = 0.0;
    for i in 0..game.num_players() {
        let g = game.cost_grad(i, x)?;
        let y = shifted(game, i, x, &g, lambda);
        ensure_finite(&y, "shifted action")?;
        total += game.cost(i, x)? - game.cost(i, &y)?;
    }
    if !total.is_finite() {
        return Err(Error::NonFinite { what: "GNI value" });
    }
    Ok(total)
}

/// Gradient of [`gni_value`]. With `T_i` the shift and `w_i = grad f_i(T_i x)`,
/// each player contributes `grad f_i(x) - w_i + lambda * H_i(x) P_i w_i`; the
/// last term is dropped in [`GradMode::FirstOrder`].
pub fn gni_grad<G: Game + ?Sized>(x: &[f64], game: &G, lambda: f64, mode: GradMode) -> Result<Vec<f64>> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    let mut out = vec![0.0; x.len()];
    for i in 0..game.num_players() {
        let g = game.cost_grad(i, x)?;
        let y = shifted(game, i, x, &g, lambda);
        ensure_finite(&y, "shifted action")?;
        let w = game.cost_grad(i, &y)?;
        vecops::axpy(1.0, &g, &mut out);
        vecops::axpy(-1.0, &w, &mut out);
        if mode == GradMode::Exact {
            let mut own = vec![0.0; x.len()];
            let block = game.block(i);
            own[block.clone()].copy_from_slice(&w[block]);
            let hv = game.cost_hvp(i, x, &own)?;
            vecops::axpy(lambda, &hv, &mut out);
        }
    }
    ensure_finite(&out, "GNI gradient")?;
    Ok(out)
}

/// Simultaneous gradient: each player's own-cost gradient, concatenated.
pub fn own_gradients<G: Game + ?Sized>(x: &[f64], game: &G) -> Result<Vec<f64>> {
    let mut xi = vec![0.0; x.len()];
    for i in 0..game.num_players() {
        let block = game.block(i);
        let g = game.cost_grad(i, x)?;
        xi[block.clone()].copy_from_slice(&g[block]);
    }
    Ok(xi)
}

/// Central-difference Jacobian of [`own_gradients`], row-major `n x n`,
/// with column step `fd_eps * (1 + |x|)`.
pub fn own_gradient_jacobian<G: Game + ?Sized>(x: &[f64], game: &G, fd_eps: f64) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let h = fd_eps * (1.0 + vecops::norm(x));
    let mut jac = vec![vec![0.0; n]; n];
    let mut probe = x.to_vec();
    for col in 0..n {
        probe[col] = x[col] + h;
        let plus = own_gradients(&probe, game)?;
        probe[col] = x[col] - h;
        let minus = own_gradients(&probe, game)?;
        probe[col] = x[col];
        for (row, jrow) in jac.iter_mut().enumerate() {
            jrow[col] = (plus[row] - minus[row]) / (2.0 * h);
        }
    }
    if !jac.iter().all(|r| vecops::all_finite(r)) {
        return Err(Error::NonFinite { what: "SGA Jacobian" });
    }
    Ok(jac)
}

/// SGA update direction `xi + lambda_sga * A^T xi` with `A = (J - J^T) / 2`.
pub fn sga_direction<G: Game + ?Sized>(x: &[f64], game: &G, lambda_sga: f64, fd_eps: f64) -> Result<Vec<f64>> {
    if !lambda_sga.is_finite() {
        return Err(Error::invalid("lambda_sga", "must be finite"));
    }
    let xi = own_gradients(x, game)?;
    if lambda_sga == 0.0 {
        return Ok(xi);
    }
    let jac = own_gradient_jacobian(x, game, fd_eps)?;
    let n = x.len();
    // (A^T xi)_c = sum_r A[r][c] xi[r]
    let mut dir = xi.clone();
    for (c, d) in dir.iter_mut().enumerate() {
        let mut s = 0.0;
        for r in 0..n {
            s += 0.5 * (jac[r][c] - jac[c][r]) * xi[r];
        }
        *d += lambda_sga * s;
    }
    ensure_finite(&dir, "SGA direction")?;
    Ok(dir)
}

/// `x - rho * direction`.
pub fn baseline_step(x: &[f64], direction: &[f64], rho: f64) -> Result<Vec<f64>> {
    if x.len() != direction.len() {
        return Err(Error::DimensionMismatch {
            what: "baseline direction",
            expected: x.len(),
            got: direction.len(),
        });
    }
    Ok(vecops::add_scaled(x, -rho, direction))
}
