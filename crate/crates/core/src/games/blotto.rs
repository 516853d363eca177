use super::{check_point, Game};
use crate::error::{Error, Result};

/// Probability mass mixed uniformly into the normalized exponential so that
/// every allocation stays strictly positive and the slack strictly nonzero
/// even when raw coordinates differ by thousands.
pub const FEASIBLE_FLOOR: f64 = 1e-12;

/// Two-player general Blotto game with payoff `tanh(x_ij - x_-ij)` per battlefield.
///
/// Players act in raw coordinates `z_i` of length `m + 1`; the allocation is
/// `x_i = X_i * normexp(z_i)[..m]` where the last coordinate is slack, so any
/// finite `z_i` maps to `x_ij > 0`, `sum_j x_ij < X_i`. Costs are negated payoff
/// sums.
#[derive(Clone, Debug, PartialEq)]
pub struct BlottoGame {
    m: usize,
    budgets: [f64; 2],
    dims: [usize; 2],
}

impl BlottoGame {
    /// Budgets are reordered so that `X_1 <= X_2`.
    pub fn new(m: usize, x1: f64, x2: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m", "need at least one battlefield"));
        }
        if !(x1.is_finite() && x2.is_finite() && x1 > 0.0 && x2 > 0.0) {
            return Err(Error::invalid("budgets", "budgets must be positive and finite"));
        }
        let budgets = if x1 <= x2 { [x1, x2] } else { [x2, x1] };
        Ok(BlottoGame {
            m,
            budgets,
            dims: [m + 1, m + 1],
        })
    }

    pub fn battlefields(&self) -> usize {
        self.m
    }

    pub fn budgets(&self) -> [f64; 2] {
        self.budgets
    }

    /// Maps raw coordinates of player `i` to its resource allocation.
    pub fn feasible_map(&self, i: usize, z: &[f64]) -> Result<Vec<f64>> {
        self.check_raw(i, z)?;
        let (x, _) = self.map_with_weights(i, z);
        Ok(x)
    }

    fn check_raw(&self, i: usize, z: &[f64]) -> Result<()> {
        if i >= 2 {
            return Err(Error::PlayerOutOfRange { index: i, players: 2 });
        }
        if z.len() != self.m + 1 {
            return Err(Error::DimensionMismatch {
                what: "blotto raw parameters",
                expected: self.m + 1,
                got: z.len(),
            });
        }
        if !z.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { what: "blotto raw parameters" });
        }
        Ok(())
    }

    // Returns (allocation, softmax weights over all m+1 coordinates).
    fn map_with_weights(&self, i: usize, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = z.iter().map(|&v| (v - max).exp()).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= total);
        let k = (self.m + 1) as f64;
        let budget = self.budgets[i];
        let x = p[..self.m]
            .iter()
            .map(|&pj| budget * ((1.0 - k * FEASIBLE_FLOOR) * pj + FEASIBLE_FLOOR))
            .collect();
        (x, p)
    }

    // Pulls a gradient w.r.t. the allocation back to raw coordinates.
    fn pullback(&self, i: usize, p: &[f64], gx: &[f64]) -> Vec<f64> {
        let scale = self.budgets[i] * (1.0 - (self.m + 1) as f64 * FEASIBLE_FLOOR);
        let weighted: f64 = gx.iter().zip(p).map(|(g, pj)| g * pj).sum();
        (0..=self.m)
            .map(|k| {
                let own = if k < self.m { gx[k] } else { 0.0 };
                scale * p[k] * (own - weighted)
            })
            .collect()
    }
}

impl Game for BlottoGame {
    fn num_players(&self) -> usize {
        2
    }

    fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn cost(&self, i: usize, x: &[f64]) -> Result<f64> {
        check_point(self, i, x)?;
        let (z1, z2) = x.split_at(self.m + 1);
        let (a1, _) = self.map_with_weights(0, z1);
        let (a2, _) = self.map_with_weights(1, z2);
        let payoff1: f64 = a1.iter().zip(&a2).map(|(u, v)| (u - v).tanh()).sum();
        Ok(if i == 0 { -payoff1 } else { payoff1 })
    }

    fn cost_grad(&self, i: usize, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self, i, x)?;
        let (z1, z2) = x.split_at(self.m + 1);
        let (a1, p1) = self.map_with_weights(0, z1);
        let (a2, p2) = self.map_with_weights(1, z2);
        // d f_1 / d x_1j = -(1 - tanh^2), d f_1 / d x_2j = +(1 - tanh^2); f_2 = -f_1.
        let sign = if i == 0 { -1.0 } else { 1.0 };
        let g1: Vec<f64> = a1
            .iter()
            .zip(&a2)
            .map(|(u, v)| {
                let t = (u - v).tanh();
                sign * (1.0 - t * t)
            })
            .collect();
        let g2: Vec<f64> = g1.iter().map(|v| -v).collect();
        let mut out = self.pullback(0, &p1, &g1);
        out.extend(self.pullback(1, &p2, &g2));
        Ok(out)
    }
}
