use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{mismatch, Error, Result};
use crate::hmsf::FeatureVector;
use crate::tensor::Pose;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MlpShape {
    pub input: usize,
    pub hidden1: usize,
    pub hidden2: usize,
    pub output: usize,
}

impl MlpShape {
    pub fn new(input: usize, hidden1: usize, hidden2: usize, output: usize) -> Result<Self> {
        if input == 0 || hidden1 == 0 || hidden2 == 0 || output == 0 {
            return Err(Error::InvalidArgument("MLP widths must be >= 1".into()));
        }
        if output % 3 != 0 {
            return Err(Error::InvalidArgument(format!(
                "output width {output} is not a multiple of 3"
            )));
        }
        Ok(Self {
            input,
            hidden1,
            hidden2,
            output,
        })
    }

    pub fn joints(&self) -> usize {
        self.output / 3
    }

    /// Lengths of (W1, b1, W2, b2, W3, b3).
    pub fn tensor_lens(&self) -> [usize; 6] {
        [
            self.hidden1 * self.input,
            self.hidden1,
            self.hidden2 * self.hidden1,
            self.hidden2,
            self.output * self.hidden2,
            self.output,
        ]
    }
}

/// `(C·H1 + H1) + (H1·H2 + H2) + (H2·D_out + D_out)`.
pub fn param_count(shape: &MlpShape) -> u64 {
    let (c, h1, h2, o) = (
        shape.input as u64,
        shape.hidden1 as u64,
        shape.hidden2 as u64,
        shape.output as u64,
    );
    (c * h1 + h1) + (h1 * h2 + h2) + (h2 * o + o)
}

/// Row-major weight matrices (`W[i][j]` maps input `j` to unit `i`) and
/// biases. Gradients use the same type.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpWeights {
    shape: MlpShape,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
    pub w3: Vec<f64>,
    pub b3: Vec<f64>,
}

impl MlpWeights {
    pub fn zeros(shape: MlpShape) -> Self {
        let [l1, l2, l3, l4, l5, l6] = shape.tensor_lens();
        Self {
            shape,
            w1: vec![0.0; l1],
            b1: vec![0.0; l2],
            w2: vec![0.0; l3],
            b2: vec![0.0; l4],
            w3: vec![0.0; l5],
            b3: vec![0.0; l6],
        }
    }

    /// Glorot-uniform weights in `±sqrt(6 / (fan_in + fan_out))`, zero
    /// biases.
    pub fn init(shape: MlpShape, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = Self::zeros(shape);
        let layers = [
            (shape.input, shape.hidden1),
            (shape.hidden1, shape.hidden2),
            (shape.hidden2, shape.output),
        ];
        for (tensor, (fan_in, fan_out)) in [&mut w.w1, &mut w.w2, &mut w.w3].into_iter().zip(layers) {
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for v in tensor.iter_mut() {
                *v = rng.gen_range(-limit..=limit);
            }
        }
        w
    }

    /// Rebuilds weights from the concatenation (W1, b1, W2, b2, W3, b3).
    pub fn from_flat(shape: MlpShape, values: Vec<f64>) -> Result<Self> {
        let expected = param_count(&shape) as usize;
        if values.len() != expected {
            return Err(mismatch(expected, values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite weight".into()));
        }
        let mut w = Self::zeros(shape);
        let mut offset = 0;
        for tensor in w.tensors_mut() {
            let n = tensor.len();
            tensor.copy_from_slice(&values[offset..offset + n]);
            offset += n;
        }
        Ok(w)
    }

    pub fn shape(&self) -> MlpShape {
        self.shape
    }

    pub fn param_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn tensors(&self) -> [&[f64]; 6] {
        [&self.w1, &self.b1, &self.w2, &self.b2, &self.w3, &self.b3]
    }

    pub fn tensors_mut(&mut self) -> [&mut Vec<f64>; 6] {
        [
            &mut self.w1,
            &mut self.b1,
            &mut self.w2,
            &mut self.b2,
            &mut self.w3,
            &mut self.b3,
        ]
    }

    pub fn flat(&self) -> Vec<f64> {
        self.tensors().concat()
    }

    /// Rounds every parameter to f32, the checkpoint precision.
    pub fn quantized(&self) -> Self {
        let mut w = self.clone();
        for t in w.tensors_mut() {
            t.iter_mut().for_each(|v| *v = *v as f32 as f64);
        }
        w
    }

    pub(crate) fn add_assign(&mut self, other: &MlpWeights) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }

    pub(crate) fn scale(&mut self, alpha: f64) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= alpha);
        }
    }
}

/// Intermediate activations kept for backpropagation.
#[derive(Debug, Clone)]
pub struct Activations {
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub output: Vec<f64>,
}

fn dense(w: &[f64], b: &[f64], x: &[f64], relu: bool) -> Vec<f64> {
    let n_in = x.len();
    b.iter()
        .enumerate()
        .map(|(i, bias)| {
            let row = &w[i * n_in..(i + 1) * n_in];
            let z = bias + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            if relu {
                z.max(0.0)
            } else {
                z
            }
        })
        .collect()
}

pub fn forward_raw(w: &MlpWeights, f: &[f64]) -> Result<Activations> {
    if f.len() != w.shape.input {
        return Err(mismatch(w.shape.input, f.len()));
    }
    let h1 = dense(&w.w1, &w.b1, f, true);
    let h2 = dense(&w.w2, &w.b2, &h1, true);
    let output = dense(&w.w3, &w.b3, &h2, false);
    Ok(Activations { h1, h2, output })
}

/// `o = W3·relu(W2·relu(W1·f + b1) + b2) + b3`, reshaped to J × 3 mm.
pub fn prn_forward(w: &MlpWeights, f: &FeatureVector) -> Result<Pose> {
    Pose::from_flat(&forward_raw(w, f.as_slice())?.output)
}

/// Loss `½·mean((o − t)²)` for one sample.
pub fn half_mse(output: &[f64], target: &[f64]) -> f64 {
    0.5 * output
        .iter()
        .zip(target)
        .map(|(o, t)| (o - t) * (o - t))
        .sum::<f64>()
        / output.len() as f64
}

/// Accumulates the gradient of `½·mean((o − t)²)` into `grad` and returns
/// the loss. ReLU's derivative at zero is taken as zero.
pub fn accumulate_gradient(
    w: &MlpWeights,
    f: &[f64],
    target: &[f64],
    grad: &mut MlpWeights,
) -> Result<f64> {
    let s = w.shape;
    if target.len() != s.output {
        return Err(mismatch(s.output, target.len()));
    }
    let act = forward_raw(w, f)?;
    let inv = 1.0 / s.output as f64;
    let delta3: Vec<f64> = act.output.iter().zip(target).map(|(o, t)| (o - t) * inv).collect();

    let mut delta2 = vec![0.0; s.hidden2];
    for (o, &d) in delta3.iter().enumerate() {
        grad.b3[o] += d;
        let row = o * s.hidden2;
        for j in 0..s.hidden2 {
            grad.w3[row + j] += d * act.h2[j];
            delta2[j] += w.w3[row + j] * d;
        }
    }
    for (d, &h) in delta2.iter_mut().zip(&act.h2) {
        if h <= 0.0 {
            *d = 0.0;
        }
    }

    let mut delta1 = vec![0.0; s.hidden1];
    for (i, &d) in delta2.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        grad.b2[i] += d;
        let row = i * s.hidden1;
        for j in 0..s.hidden1 {
            grad.w2[row + j] += d * act.h1[j];
            delta1[j] += w.w2[row + j] * d;
        }
    }
    for (d, &h) in delta1.iter_mut().zip(&act.h1) {
        if h <= 0.0 {
            *d = 0.0;
        }
    }

    for (i, &d) in delta1.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        grad.b1[i] += d;
        let row = i * s.input;
        for (g, x) in grad.w1[row..row + s.input].iter_mut().zip(f) {
            *g += d * x;
        }
    }
    Ok(half_mse(&act.output, target))
}

/// Exact gradients of `½·mean((o − t)²)` for one feature/target pair.
pub fn prn_backward(w: &MlpWeights, f: &FeatureVector, target: &Pose) -> Result<MlpWeights> {
    let mut grad = MlpWeights::zeros(w.shape);
    accumulate_gradient(w, f.as_slice(), &target.flat(), &mut grad)?;
    Ok(grad)
}
