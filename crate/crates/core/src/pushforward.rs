//! Mixed strategies as pushforwards of the uniform distribution on `[0,1]^d`.
//!
//! A [`Generator`] maps latent noise `omega` to an action. Sampling the
//! strategy means sampling `omega` and calling [`Generator::forward`]; the
//! parameters live in one flat vector so optimizers can treat every player's
//! strategy as a plain point in `R^p`.

use std::path::Path;

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView1, ArrayView2, ArrayViewMut2, Axis};
use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, SolverRng};
use crate::vecops;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Relu,
    Identity,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
            Activation::Identity => z,
        }
    }

    /// Derivative expressed through the activation output. ReLU uses 0 at 0.
    #[inline]
    fn deriv_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }
}

/// Hidden-layer layout of a generator network; the output layer is linear.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub hidden: Vec<usize>,
    pub activations: Vec<Activation>,
}

impl Architecture {
    /// Six hidden layers 20-40-160-160-40-20 with tanh, tanh, tanh, relu, tanh, tanh.
    pub fn standard() -> Self {
        use Activation::*;
        Architecture {
            hidden: vec![20, 40, 160, 160, 40, 20],
            activations: vec![Tanh, Tanh, Tanh, Relu, Tanh, Tanh],
        }
    }

    pub fn new(hidden: Vec<usize>, activations: Vec<Activation>) -> Result<Self> {
        if hidden.len() != activations.len() {
            return Err(Error::invalid(
                "activations",
                format!("{} hidden layers but {} activations", hidden.len(), activations.len()),
            ));
        }
        if hidden.contains(&0) {
            return Err(Error::invalid("hidden", "layer widths must be positive"));
        }
        Ok(Architecture { hidden, activations })
    }

    pub fn layer_sizes(&self, d: usize, n_out: usize) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.hidden.len() + 2);
        sizes.push(d);
        sizes.extend_from_slice(&self.hidden);
        sizes.push(n_out);
        sizes
    }

    pub fn param_count(&self, d: usize, n_out: usize) -> usize {
        self.layer_sizes(d, n_out)
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }
}

/// How to build a player's generator.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    Net(Architecture),
    Constant,
}

/// Feed-forward network over a flat parameter vector.
///
/// Layer `l` stores its weight matrix row-major as `fan_out x fan_in`,
/// followed by its bias.
#[derive(Clone, Debug, PartialEq)]
pub struct NetGenerator {
    layer_sizes: Vec<usize>,
    activations: Vec<Activation>,
    params: Vec<f64>,
}

impl NetGenerator {
    pub fn new(layer_sizes: Vec<usize>, activations: Vec<Activation>, params: Vec<f64>) -> Result<Self> {
        if layer_sizes.len() < 2 || layer_sizes.contains(&0) {
            return Err(Error::invalid("layer_sizes", "need positive input and output sizes"));
        }
        if activations.len() != layer_sizes.len() - 2 {
            return Err(Error::invalid("activations", "one activation per hidden layer"));
        }
        let expected: usize = layer_sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "network parameters",
                expected,
                got: params.len(),
            });
        }
        Ok(NetGenerator {
            layer_sizes,
            activations,
            params,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    fn num_layers(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    // (weight offset, fan_in, fan_out) per layer; bias follows the weights.
    fn layer_offsets(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let mut off = 0;
        self.layer_sizes.windows(2).map(move |w| {
            let start = off;
            off += w[0] * w[1] + w[1];
            (start, w[0], w[1])
        })
    }

    fn weights(&self, off: usize, fan_in: usize, fan_out: usize) -> (ArrayView2<'_, f64>, ArrayView1<'_, f64>) {
        let w = ArrayView2::from_shape((fan_out, fan_in), &self.params[off..off + fan_in * fan_out])
            .expect("layer slice matches shape");
        let b_off = off + fan_in * fan_out;
        let b = ArrayView1::from(&self.params[b_off..b_off + fan_out]);
        (w, b)
    }

    fn forward_batch(&self, omega: ArrayView2<'_, f64>) -> BatchForward {
        let rows = omega.nrows();
        let last = self.num_layers() - 1;
        let mut hidden: Vec<Array2<f64>> = Vec::with_capacity(last);
        let mut output = None;
        for (l, (off, fan_in, fan_out)) in self.layer_offsets().enumerate() {
            let (w, b) = self.weights(off, fan_in, fan_out);
            let mut z = Array2::<f64>::zeros((rows, fan_out));
            {
                let input = if l == 0 { omega.view() } else { hidden[l - 1].view() };
                general_mat_mul(1.0, &input, &w.t(), 0.0, &mut z);
            }
            z += &b;
            if l == last {
                output = Some(z);
            } else {
                let act = self.activations[l];
                z.mapv_inplace(|v| act.apply(v));
                hidden.push(z);
            }
        }
        BatchForward {
            hidden,
            output: output.expect("at least one layer"),
        }
    }

    // Sum over rows of (d output_row / d params)^T upstream_row.
    fn vjp_batch(
        &self,
        omega: ArrayView2<'_, f64>,
        fwd: &BatchForward,
        upstream: ArrayView2<'_, f64>,
        out: &mut [f64],
    ) {
        let offsets: Vec<_> = self.layer_offsets().collect();
        let mut delta = upstream.to_owned();
        for l in (0..self.num_layers()).rev() {
            let (off, fan_in, fan_out) = offsets[l];
            let input = if l == 0 { omega.view() } else { fwd.hidden[l - 1].view() };
            {
                let (gw, gb) = out[off..off + fan_in * fan_out + fan_out].split_at_mut(fan_in * fan_out);
                let mut gw = ArrayViewMut2::from_shape((fan_out, fan_in), gw).expect("layer slice matches shape");
                general_mat_mul(1.0, &delta.t(), &input, 0.0, &mut gw);
                for (g, s) in gb.iter_mut().zip(delta.sum_axis(Axis(0))) {
                    *g = s;
                }
            }
            if l > 0 {
                let (w, _) = self.weights(off, fan_in, fan_out);
                let mut prev = delta.dot(&w);
                let act = self.activations[l - 1];
                prev.zip_mut_with(&fwd.hidden[l - 1], |d, &a| *d *= act.deriv_from_output(a));
                delta = prev;
            }
        }
    }
}

/// Cached activations of one batched forward pass.
#[derive(Clone, Debug)]
pub struct BatchForward {
    hidden: Vec<Array2<f64>>,
    output: Array2<f64>,
}

impl BatchForward {
    /// Actions, one row per latent sample.
    pub fn actions(&self) -> &Array2<f64> {
        &self.output
    }
}

/// A player's pushforward map `g: [0,1]^d -> R^{n_i}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Net(NetGenerator),
    /// Dirac strategy; its flat parameters are the action itself.
    Constant { d: usize, value: Vec<f64> },
}

impl Generator {
    pub fn constant(d: usize, value: Vec<f64>) -> Self {
        Generator::Constant { d, value }
    }

    /// Latent dimension `d`.
    pub fn latent_dim(&self) -> usize {
        match self {
            Generator::Net(net) => net.layer_sizes[0],
            Generator::Constant { d, .. } => *d,
        }
    }

    /// Action dimension `n_i`.
    pub fn action_dim(&self) -> usize {
        match self {
            Generator::Net(net) => *net.layer_sizes.last().expect("nonempty"),
            Generator::Constant { value, .. } => value.len(),
        }
    }

    pub fn params(&self) -> &[f64] {
        match self {
            Generator::Net(net) => &net.params,
            Generator::Constant { value, .. } => value,
        }
    }

    pub fn param_len(&self) -> usize {
        self.params().len()
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Generator::Constant { .. })
    }

    /// Same architecture with a replacement parameter vector.
    pub fn with_params(&self, params: Vec<f64>) -> Result<Self> {
        if params.len() != self.param_len() {
            return Err(Error::DimensionMismatch {
                what: "generator parameters",
                expected: self.param_len(),
                got: params.len(),
            });
        }
        Ok(match self {
            Generator::Net(net) => Generator::Net(NetGenerator {
                layer_sizes: net.layer_sizes.clone(),
                activations: net.activations.clone(),
                params,
            }),
            Generator::Constant { d, .. } => Generator::Constant { d: *d, value: params },
        })
    }

    fn check_latent(&self, got: usize) -> Result<()> {
        if got != self.latent_dim() {
            return Err(Error::DimensionMismatch {
                what: "latent sample",
                expected: self.latent_dim(),
                got,
            });
        }
        Ok(())
    }

    pub fn forward(&self, omega: &[f64]) -> Result<Vec<f64>> {
        self.check_latent(omega.len())?;
        let view = ArrayView2::from_shape((1, omega.len()), omega).expect("row vector");
        Ok(self.forward_batch(view)?.output.row(0).to_vec())
    }

    /// `(d forward / d params)^T upstream` at one latent sample.
    pub fn vjp_params(&self, omega: &[f64], upstream: &[f64]) -> Result<Vec<f64>> {
        self.check_latent(omega.len())?;
        let omega = ArrayView2::from_shape((1, omega.len()), omega).expect("row vector");
        let up = ArrayView2::from_shape((1, upstream.len()), upstream).expect("row vector");
        let fwd = self.forward_batch(omega)?;
        self.vjp_batch(omega, &fwd, up)
    }

    /// Forward pass over a batch of latent samples (one per row).
    pub fn forward_batch(&self, omega: ArrayView2<'_, f64>) -> Result<BatchForward> {
        self.check_latent(omega.ncols())?;
        Ok(match self {
            Generator::Net(net) => net.forward_batch(omega),
            Generator::Constant { value, .. } => {
                let row = ArrayView1::from(value.as_slice());
                let output = row
                    .broadcast((omega.nrows(), value.len()))
                    .expect("broadcast row")
                    .to_owned();
                BatchForward {
                    hidden: Vec::new(),
                    output,
                }
            }
        })
    }

    /// Sum over the batch of per-sample parameter VJPs.
    pub fn vjp_batch(
        &self,
        omega: ArrayView2<'_, f64>,
        fwd: &BatchForward,
        upstream: ArrayView2<'_, f64>,
    ) -> Result<Vec<f64>> {
        self.check_latent(omega.ncols())?;
        if upstream.ncols() != self.action_dim() {
            return Err(Error::DimensionMismatch {
                what: "VJP upstream",
                expected: self.action_dim(),
                got: upstream.ncols(),
            });
        }
        if upstream.nrows() != omega.nrows() || fwd.output.nrows() != omega.nrows() {
            return Err(Error::BatchMismatch(format!(
                "latent batch has {} rows, upstream {}, cached forward {}",
                omega.nrows(),
                upstream.nrows(),
                fwd.output.nrows()
            )));
        }
        let mut out = vec![0.0; self.param_len()];
        match self {
            Generator::Net(net) => net.vjp_batch(omega, fwd, upstream, &mut out),
            Generator::Constant { .. } => {
                for (o, s) in out.iter_mut().zip(upstream.sum_axis(Axis(0))) {
                    *o = s;
                }
            }
        }
        Ok(out)
    }

    /// A copy with parameters `theta + scale * direction`.
    pub fn axpy_params(&self, direction: &[f64], scale: f64) -> Result<Self> {
        if direction.len() != self.param_len() {
            return Err(Error::DimensionMismatch {
                what: "parameter direction",
                expected: self.param_len(),
                got: direction.len(),
            });
        }
        self.with_params(vecops::add_scaled(self.params(), scale, direction))
    }

    pub fn to_checkpoint(&self) -> GeneratorCheckpoint {
        match self {
            Generator::Net(net) => GeneratorCheckpoint {
                variant: "net".into(),
                d: self.latent_dim(),
                n_i: self.action_dim(),
                layer_sizes: net.layer_sizes.clone(),
                activations: net.activations.clone(),
                params: net.params.clone(),
            },
            Generator::Constant { d, value } => GeneratorCheckpoint {
                variant: "constant".into(),
                d: *d,
                n_i: value.len(),
                layer_sizes: Vec::new(),
                activations: Vec::new(),
                params: value.clone(),
            },
        }
    }

    pub fn from_checkpoint(ck: GeneratorCheckpoint) -> Result<Self> {
        match ck.variant.as_str() {
            "net" => {
                if ck.layer_sizes.first() != Some(&ck.d) || ck.layer_sizes.last() != Some(&ck.n_i) {
                    return Err(Error::invalid("layer_sizes", "must start at d and end at n_i"));
                }
                Ok(Generator::Net(NetGenerator::new(ck.layer_sizes, ck.activations, ck.params)?))
            }
            "constant" => {
                if ck.params.len() != ck.n_i {
                    return Err(Error::DimensionMismatch {
                        what: "constant generator value",
                        expected: ck.n_i,
                        got: ck.params.len(),
                    });
                }
                Ok(Generator::Constant {
                    d: ck.d,
                    value: ck.params,
                })
            }
            other => Err(Error::invalid("variant", format!("unknown generator variant `{other}`"))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(&self.to_checkpoint())?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_checkpoint(serde_json::from_str(&text)?)
    }
}

/// JSON form of a [`Generator`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCheckpoint {
    pub variant: String,
    pub d: usize,
    pub n_i: usize,
    pub layer_sizes: Vec<usize>,
    pub activations: Vec<Activation>,
    pub params: Vec<f64>,
}

/// Draws a generator: Glorot-uniform weights with zero biases for networks,
/// U(-0.5, 0.5)^{n_i} for constants.
pub fn init_generator_with(kind: &GeneratorKind, d: usize, n_i: usize, rng: &mut SolverRng) -> Generator {
    assert!(d >= 1 && n_i >= 1, "latent and action dimensions must be positive");
    match kind {
        GeneratorKind::Constant => {
            let dist = Uniform::new(-0.5, 0.5);
            Generator::Constant {
                d,
                value: (0..n_i).map(|_| dist.sample(rng)).collect(),
            }
        }
        GeneratorKind::Net(arch) => {
            let sizes = arch.layer_sizes(d, n_i);
            let mut params = Vec::with_capacity(arch.param_count(d, n_i));
            for w in sizes.windows(2) {
                let (fan_in, fan_out) = (w[0], w[1]);
                let a = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let dist = Uniform::new_inclusive(-a, a);
                params.extend((0..fan_in * fan_out).map(|_| dist.sample(rng)));
                params.extend(std::iter::repeat_n(0.0, fan_out));
            }
            Generator::Net(NetGenerator {
                layer_sizes: sizes,
                activations: arch.activations.clone(),
                params,
            })
        }
    }
}

pub fn init_generator(kind: &GeneratorKind, d: usize, n_i: usize, seed: u64) -> Generator {
    init_generator_with(kind, d, n_i, &mut rng::seeded(seed, rng::stream::INIT))
}

/// `B x d` latent samples from U[0,1]^d.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaBatch {
    samples: Array2<f64>,
    pub seed: Option<u64>,
}

impl OmegaBatch {
    pub fn new(samples: Array2<f64>) -> Result<Self> {
        if samples.nrows() == 0 || samples.ncols() == 0 {
            return Err(Error::BatchMismatch("empty latent batch".into()));
        }
        if !samples.iter().all(|v| (0.0..=1.0).contains(v)) {
            return Err(Error::BatchMismatch("latent samples must lie in [0,1]".into()));
        }
        Ok(OmegaBatch { samples, seed: None })
    }

    pub fn samples(&self) -> ArrayView2<'_, f64> {
        self.samples.view()
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.samples.ncols()
    }

    pub fn row(&self, b: usize) -> ArrayView1<'_, f64> {
        self.samples.row(b)
    }
}

pub fn sample_omega(rng: &mut SolverRng, batch: usize, d: usize) -> OmegaBatch {
    assert!(batch >= 1 && d >= 1, "batch size and latent dimension must be positive");
    OmegaBatch {
        samples: Array2::from_shape_simple_fn((batch, d), || rng.gen::<f64>()),
        seed: None,
    }
}
