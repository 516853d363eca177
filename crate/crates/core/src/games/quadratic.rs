use nalgebra::DMatrix;
use ndarray::{Array2, ArrayView1};

use super::{check_point, Game};
use crate::error::{Error, Result};
use crate::vecops;

/// `f_i(x) = x^T Q_i x + r_i^T x` over the joint vector `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticGame {
    dims: Vec<usize>,
    q: Vec<Array2<f64>>,
    r: Vec<Vec<f64>>,
    // Q_i + Q_i^T, the constant Hessian of each cost.
    sym: Vec<Array2<f64>>,
}

impl QuadraticGame {
    pub fn new(dims: Vec<usize>, q: Vec<Array2<f64>>, r: Vec<Vec<f64>>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::invalid("dims", "every player needs at least one action dimension"));
        }
        let n: usize = dims.iter().sum();
        let players = dims.len();
        if q.len() != players || r.len() != players {
            return Err(Error::DimensionMismatch {
                what: "per-player Q/r count",
                expected: players,
                got: q.len().min(r.len()),
            });
        }
        for (qi, ri) in q.iter().zip(&r) {
            if qi.dim() != (n, n) {
                return Err(Error::DimensionMismatch {
                    what: "Q matrix",
                    expected: n,
                    got: if qi.nrows() != n { qi.nrows() } else { qi.ncols() },
                });
            }
            if ri.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "r vector",
                    expected: n,
                    got: ri.len(),
                });
            }
            if !qi.iter().all(|v| v.is_finite()) || !vecops::all_finite(ri) {
                return Err(Error::NonFinite { what: "quadratic game payload" });
            }
        }
        let sym = q.iter().map(|qi| qi + &qi.t()).collect();
        Ok(QuadraticGame { dims, q, r, sym })
    }

    pub(crate) fn from_rows(dims: Vec<usize>, q: Vec<Vec<Vec<f64>>>, r: Vec<Vec<f64>>) -> Result<Self> {
        let n: usize = dims.iter().sum();
        let mats = q
            .into_iter()
            .map(|rows| {
                if rows.len() != n || rows.iter().any(|row| row.len() != n) {
                    return Err(Error::DimensionMismatch {
                        what: "Q matrix rows",
                        expected: n,
                        got: rows.len(),
                    });
                }
                let flat: Vec<f64> = rows.into_iter().flatten().collect();
                Ok(Array2::from_shape_vec((n, n), flat).expect("shape checked"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims, mats, r)
    }

    pub fn q(&self) -> &[Array2<f64>] {
        &self.q
    }

    pub fn r(&self) -> &[Vec<f64>] {
        &self.r
    }

    /// `Q_i + Q_i^T` for every player.
    pub fn hessians(&self) -> &[Array2<f64>] {
        &self.sym
    }

    pub(crate) fn q_rows(&self) -> Vec<Vec<Vec<f64>>> {
        self.q
            .iter()
            .map(|m| m.rows().into_iter().map(|row| row.to_vec()).collect())
            .collect()
    }

    /// `max_i ||Q_i + Q_i^T||_2`, the Lipschitz constant of every cost gradient.
    pub fn gradient_lipschitz(&self) -> f64 {
        self.sym
            .iter()
            .map(|s| {
                let n = s.nrows();
                let m = DMatrix::from_fn(n, n, |a, b| s[[a, b]]);
                m.symmetric_eigenvalues()
                    .iter()
                    .fold(0.0_f64, |acc, e| acc.max(e.abs()))
            })
            .fold(0.0, f64::max)
    }
}

impl Game for QuadraticGame {
    fn num_players(&self) -> usize {
        self.dims.len()
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn cost(&self, i: usize, x: &[f64]) -> Result<f64> {
        check_point(self, i, x)?;
        let xv = ArrayView1::from(x);
        Ok(xv.dot(&self.q[i].dot(&xv)) + vecops::dot(&self.r[i], x))
    }

    fn cost_grad(&self, i: usize, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self, i, x)?;
        let mut g = self.sym[i].dot(&ArrayView1::from(x)).to_vec();
        vecops::axpy(1.0, &self.r[i], &mut g);
        Ok(g)
    }

    fn cost_hvp(&self, i: usize, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        check_point(self, i, x)?;
        if v.len() != x.len() {
            return Err(Error::DimensionMismatch {
                what: "HVP direction",
                expected: x.len(),
                got: v.len(),
            });
        }
        if !vecops::all_finite(v) {
            return Err(Error::NonFinite { what: "HVP direction" });
        }
        Ok(self.sym[i].dot(&ArrayView1::from(v)).to_vec())
    }
}
