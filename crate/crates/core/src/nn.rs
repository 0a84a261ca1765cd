//! Small fully connected networks with tanh hidden units.
//!
//! Besides ordinary backpropagation this module provides the input gradient of a scalar
//! critic and the parameter gradient of the gradient penalty `mean_b (|grad_x D(x_b)| - 1)^2`,
//! obtained by differentiating through the input-gradient computation analytically.
//!
//! Layer `l` maps `h_{l-1}` to `a_l = W_l h_{l-1} + b_l`; hidden layers apply tanh and the
//! last layer applies the configured output activation. Weights are stored row-major as
//! `outputs x inputs`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Dense row-major batch: one sample per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(alloc::format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Stacks equally long rows. An empty slice gives a `0 x 0` matrix.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::shape(alloc::format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }

    /// Column means.
    pub fn mean_row(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.cols];
        for r in self.iter_rows() {
            for (a, v) in acc.iter_mut().zip(r) {
                *a += v;
            }
        }
        acc.iter_mut().for_each(|a| *a /= self.rows as f64);
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Linear,
}

impl Activation {
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => libm::tanh(x),
            Activation::Linear => x,
        }
    }

    /// Derivative expressed through the activation's output.
    fn slope(self, out: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - out * out,
            Activation::Linear => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    inputs: usize,
    outputs: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Layer {
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    fn weight_row(&self, o: usize) -> &[f64] {
        &self.weights[o * self.inputs..(o + 1) * self.inputs]
    }

    fn affine(&self, x: &[f64], out: &mut [f64]) {
        for (o, slot) in out.iter_mut().enumerate() {
            *slot = self.bias[o] + dot(self.weight_row(o), x);
        }
    }

    /// `out = W^T d`
    fn transpose_mul(&self, d: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (o, &dv) in d.iter().enumerate() {
            if dv != 0.0 {
                axpy(dv, self.weight_row(o), out);
            }
        }
    }
}

/// Fully connected network: tanh on hidden layers, `output` on the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<Layer>,
    output: Activation,
    version: u64,
}

/// Post-activation values of every layer for one batch, tied to the parameter version that
/// produced them.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    version: u64,
    activations: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.activations
            .last()
            .expect("cache holds at least the input")
    }
}

/// Gradients shaped like an [`Mlp`]'s parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(net: &Mlp) -> Self {
        Self {
            weights: net
                .layers
                .iter()
                .map(|l| vec![0.0; l.weights.len()])
                .collect(),
            biases: net.layers.iter().map(|l| vec![0.0; l.bias.len()]).collect(),
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &Gradients, scale: f64) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            axpy(scale, b, a);
        }
        for (a, b) in self.biases.iter_mut().zip(&other.biases) {
            axpy(scale, b, a);
        }
    }

    /// Layer by layer, weights then biases; the order of [`Mlp::flat_params`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w);
            out.extend_from_slice(b);
        }
        out
    }

    fn first_non_finite(&self) -> Option<usize> {
        self.weights
            .iter()
            .zip(&self.biases)
            .position(|(w, b)| w.iter().chain(b).any(|v| !v.is_finite()))
    }
}

/// Result of backpropagating a loss gradient through a network.
#[derive(Debug, Clone, PartialEq)]
pub struct Backprop {
    pub params: Gradients,
    /// Gradient of the loss with respect to each input row.
    pub input: Matrix,
}

impl Mlp {
    /// Network with the given layer widths (`widths[0]` inputs, `widths.last()` outputs).
    /// Weights are uniform in `+-sqrt(6 / (in + out))`, biases zero.
    pub fn new(widths: &[usize], output: Activation, rng: &mut RandomSource) -> Result<Self> {
        if widths.len() < 2 || widths.contains(&0) {
            return Err(Error::config(alloc::format!(
                "invalid layer widths {widths:?}"
            )));
        }
        let layers = widths
            .windows(2)
            .map(|w| {
                let (inputs, outputs) = (w[0], w[1]);
                let limit = libm::sqrt(6.0 / (inputs + outputs) as f64);
                let weights = (0..inputs * outputs)
                    .map(|_| (2.0 * rng.uniform() - 1.0) * limit)
                    .collect();
                Layer {
                    inputs,
                    outputs,
                    weights,
                    bias: vec![0.0; outputs],
                }
            })
            .collect();
        Ok(Self {
            layers,
            output,
            version: 0,
        })
    }

    /// Builds a network from explicit `(weights, bias)` pairs, weights row-major `out x in`.
    pub fn from_layers(
        layers: Vec<(usize, usize, Vec<f64>, Vec<f64>)>,
        output: Activation,
    ) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::config("a network needs at least one layer"));
        }
        let mut built = Vec::with_capacity(layers.len());
        for (k, (inputs, outputs, weights, bias)) in layers.into_iter().enumerate() {
            if weights.len() != inputs * outputs || bias.len() != outputs {
                return Err(Error::shape(alloc::format!(
                    "layer {k} parameters do not match {inputs}->{outputs}"
                )));
            }
            if let Some(prev) = built.last() {
                let prev: &Layer = prev;
                if prev.outputs != inputs {
                    return Err(Error::shape(alloc::format!(
                        "layer {k} takes {inputs} inputs but the previous layer emits {}",
                        prev.outputs
                    )));
                }
            }
            built.push(Layer {
                inputs,
                outputs,
                weights,
                bias,
            });
        }
        Ok(Self {
            layers: built,
            output,
            version: 0,
        })
    }

    pub fn inputs(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn outputs(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn output_activation(&self) -> Activation {
        self.output
    }

    fn activation(&self, layer: usize) -> Activation {
        if layer + 1 == self.layers.len() {
            self.output
        } else {
            Activation::Tanh
        }
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    /// Layer by layer, weights (row-major) then biases.
    pub fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.bias);
        }
        out
    }

    pub fn set_flat_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::shape(alloc::format!(
                "expected {} parameters, got {}",
                self.param_count(),
                params.len()
            )));
        }
        let mut rest = params;
        for l in &mut self.layers {
            let (w, r) = rest.split_at(l.weights.len());
            l.weights.copy_from_slice(w);
            let (b, r) = r.split_at(l.bias.len());
            l.bias.copy_from_slice(b);
            rest = r;
        }
        self.version += 1;
        Ok(())
    }

    /// Parameters as little-endian f64 bytes in [`Mlp::flat_params`] order.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.flat_params()
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect()
    }

    fn check_input(&self, batch: &Matrix) -> Result<()> {
        if batch.cols != self.inputs() {
            return Err(Error::shape(alloc::format!(
                "batch has {} columns, network expects {}",
                batch.cols,
                self.inputs()
            )));
        }
        Ok(())
    }

    /// Forward pass keeping every layer's activations for backpropagation.
    pub fn forward(&self, batch: &Matrix) -> Result<ForwardCache> {
        self.check_input(batch)?;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(batch.clone());
        for (k, layer) in self.layers.iter().enumerate() {
            let act = self.activation(k);
            let prev = &activations[k];
            let mut out = Matrix::zeros(batch.rows, layer.outputs);
            for b in 0..batch.rows {
                let o = out.row_mut(b);
                layer.affine(prev.row(b), o);
                o.iter_mut().for_each(|v| *v = act.apply(*v));
            }
            activations.push(out);
        }
        Ok(ForwardCache {
            version: self.version,
            activations,
        })
    }

    pub fn predict(&self, batch: &Matrix) -> Result<Matrix> {
        Ok(self.forward(batch)?.activations.pop().expect("non-empty"))
    }

    /// Gradients of a scalar loss given `d loss / d output` for every sample.
    pub fn backward(&self, cache: &ForwardCache, loss_grad: &Matrix) -> Result<Backprop> {
        if cache.version != self.version || cache.activations.len() != self.layers.len() + 1 {
            return Err(Error::StaleCache);
        }
        let out = cache.output();
        if loss_grad.rows != out.rows || loss_grad.cols != out.cols {
            return Err(Error::shape(alloc::format!(
                "loss gradient is {}x{}, output is {}x{}",
                loss_grad.rows,
                loss_grad.cols,
                out.rows,
                out.cols
            )));
        }
        let mut grads = Gradients::zeros_like(self);
        let last = self.layers.len() - 1;
        let mut input = Matrix::zeros(out.rows, self.inputs());
        for b in 0..out.rows {
            let mut delta: Vec<f64> = loss_grad
                .row(b)
                .iter()
                .zip(out.row(b))
                .map(|(g, h)| g * self.output.slope(*h))
                .collect();
            for k in (0..=last).rev() {
                let layer = &self.layers[k];
                let h_prev = cache.activations[k].row(b);
                for (o, &d) in delta.iter().enumerate() {
                    if d != 0.0 {
                        axpy(
                            d,
                            h_prev,
                            &mut grads.weights[k][o * layer.inputs..(o + 1) * layer.inputs],
                        );
                    }
                    grads.biases[k][o] += d;
                }
                let mut prev = vec![0.0; layer.inputs];
                layer.transpose_mul(&delta, &mut prev);
                if k == 0 {
                    input.row_mut(b).copy_from_slice(&prev);
                } else {
                    for (p, h) in prev.iter_mut().zip(h_prev) {
                        *p *= 1.0 - h * h;
                    }
                    delta = prev;
                }
            }
        }
        Ok(Backprop {
            params: grads,
            input,
        })
    }

    fn check_scalar_critic(&self) -> Result<()> {
        if self.outputs() != 1 || self.output != Activation::Linear {
            return Err(Error::shape("input gradients need a single linear output"));
        }
        Ok(())
    }

    /// Per-sample gradient of the scalar output with respect to the input.
    pub fn input_gradient(&self, batch: &Matrix) -> Result<Matrix> {
        self.check_scalar_critic()?;
        let cache = self.forward(batch)?;
        let mut out = Matrix::zeros(batch.rows, self.inputs());
        for b in 0..batch.rows {
            let pass = self.input_gradient_pass(&cache, b);
            out.row_mut(b).copy_from_slice(&pass.u[0]);
        }
        Ok(out)
    }

    /// Input-gradient recursion for sample `b`: `q_L = 1`, `u_{l-1} = W_l^T q_l`,
    /// `q_l = s_l * u_l` with `s_l = 1 - h_l^2`. `u[0]` is the input gradient.
    fn input_gradient_pass(&self, cache: &ForwardCache, b: usize) -> InputGradPass {
        let n = self.layers.len();
        let mut q: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
        let mut u: Vec<Vec<f64>> = vec![Vec::new(); n];
        q[n] = vec![1.0];
        for l in (1..=n).rev() {
            let layer = &self.layers[l - 1];
            let mut ul = vec![0.0; layer.inputs];
            layer.transpose_mul(&q[l], &mut ul);
            if l > 1 {
                let h = cache.activations[l - 1].row(b);
                q[l - 1] = ul.iter().zip(h).map(|(v, h)| v * (1.0 - h * h)).collect();
            }
            u[l - 1] = ul;
        }
        InputGradPass { q, u }
    }

    /// Gradient penalty `mean_b (|grad_x D(x_b)| - 1)^2` and its parameter gradient.
    ///
    /// At a zero input gradient the norm is not differentiable; the subgradient 0 is used.
    pub fn gradient_penalty_backward(&self, interpolated: &Matrix) -> Result<(f64, Gradients)> {
        self.check_scalar_critic()?;
        let cache = self.forward(interpolated)?;
        let n = self.layers.len();
        let batch = interpolated.rows;
        let mut grads = Gradients::zeros_like(self);
        let mut penalty = 0.0;
        for b in 0..batch {
            let pass = self.input_gradient_pass(&cache, b);
            let g = &pass.u[0];
            let norm = libm::sqrt(dot(g, g));
            penalty += (norm - 1.0) * (norm - 1.0);
            if norm == 0.0 {
                continue;
            }
            let coeff = 2.0 * (norm - 1.0) / (norm * batch as f64);
            // reverse the input-gradient recursion, l = 1..=L
            let mut du: Vec<f64> = g.iter().map(|v| coeff * v).collect();
            let mut direct_h: Vec<Vec<f64>> = vec![Vec::new(); n];
            for l in 1..=n {
                let layer = &self.layers[l - 1];
                for (k, &qk) in pass.q[l].iter().enumerate() {
                    if qk != 0.0 {
                        axpy(
                            qk,
                            &du,
                            &mut grads.weights[l - 1][k * layer.inputs..(k + 1) * layer.inputs],
                        );
                    }
                }
                if l == n {
                    break;
                }
                let mut dq = vec![0.0; layer.outputs];
                layer.affine_no_bias(&du, &mut dq);
                let h = cache.activations[l].row(b);
                let mut next_du = vec![0.0; layer.outputs];
                let mut dh = vec![0.0; layer.outputs];
                for k in 0..layer.outputs {
                    let s = 1.0 - h[k] * h[k];
                    next_du[k] = dq[k] * s;
                    dh[k] = -2.0 * h[k] * dq[k] * pass.u[l][k];
                }
                direct_h[l] = dh;
                du = next_du;
            }
            // backpropagate the direct activation terms through the forward pass
            let mut upstream: Option<Vec<f64>> = None;
            for l in (1..n).rev() {
                let h = cache.activations[l].row(b);
                let mut dh = core::mem::take(&mut direct_h[l]);
                if let Some(da_next) = &upstream {
                    let mut back = vec![0.0; self.layers[l].inputs];
                    self.layers[l].transpose_mul(da_next, &mut back);
                    for (a, v) in dh.iter_mut().zip(&back) {
                        *a += v;
                    }
                }
                let da: Vec<f64> = dh.iter().zip(h).map(|(d, h)| d * (1.0 - h * h)).collect();
                let layer = &self.layers[l - 1];
                let h_prev = cache.activations[l - 1].row(b);
                for (o, &d) in da.iter().enumerate() {
                    if d != 0.0 {
                        axpy(
                            d,
                            h_prev,
                            &mut grads.weights[l - 1][o * layer.inputs..(o + 1) * layer.inputs],
                        );
                    }
                    grads.biases[l - 1][o] += d;
                }
                upstream = Some(da);
            }
        }
        Ok((penalty / batch.max(1) as f64, grads))
    }
}

impl Layer {
    /// `out = W x`
    fn affine_no_bias(&self, x: &[f64], out: &mut [f64]) {
        for (o, slot) in out.iter_mut().enumerate() {
            *slot = dot(self.weight_row(o), x);
        }
    }
}

struct InputGradPass {
    /// `q[l]` for `l = 1..=L` (index 0 unused).
    q: Vec<Vec<f64>>,
    /// `u[l]` for `l = 0..L`.
    u: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.5,
            beta2: 0.9,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    first: Gradients,
    second: Gradients,
    step: u64,
}

impl AdamState {
    pub fn new(net: &Mlp, config: AdamConfig) -> Self {
        Self {
            config,
            first: Gradients::zeros_like(net),
            second: Gradients::zeros_like(net),
            step: 0,
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }
}

/// One bias-corrected Adam update of `net` in place.
pub fn adam_step(net: &mut Mlp, grads: &Gradients, state: &mut AdamState) -> Result<()> {
    let same_shape = grads.weights.len() == net.layers.len()
        && state.first.weights.len() == net.layers.len()
        && net.layers.iter().enumerate().all(|(k, l)| {
            grads.weights[k].len() == l.weights.len()
                && grads.biases[k].len() == l.bias.len()
                && state.first.weights[k].len() == l.weights.len()
        });
    if !same_shape {
        return Err(Error::shape(
            "gradients, optimiser state and network differ in shape",
        ));
    }
    if let Some(layer) = grads.first_non_finite() {
        return Err(Error::Training {
            epoch: state.step as usize,
            what: alloc::format!(
                "non-finite gradient in layer {layer} at optimiser step {}",
                state.step
            ),
        });
    }
    state.step += 1;
    let AdamConfig {
        learning_rate,
        beta1,
        beta2,
        epsilon,
    } = state.config;
    let c1 = 1.0 - libm::pow(beta1, state.step as f64);
    let c2 = 1.0 - libm::pow(beta2, state.step as f64);
    let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
        for i in 0..p.len() {
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
            let m_hat = m[i] / c1;
            let v_hat = v[i] / c2;
            p[i] -= learning_rate * m_hat / (libm::sqrt(v_hat) + epsilon);
        }
    };
    for (k, layer) in net.layers.iter_mut().enumerate() {
        update(
            &mut layer.weights,
            &grads.weights[k],
            &mut state.first.weights[k],
            &mut state.second.weights[k],
        );
        update(
            &mut layer.bias,
            &grads.biases[k],
            &mut state.first.biases[k],
            &mut state.second.biases[k],
        );
    }
    net.version += 1;
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
