//! WGAN-GP offspring model.
//!
//! The generator maps latent noise to decision vectors in normalised coordinates
//! (`[-1, 1]^n`, enforced by a tanh output layer); the critic scores normalised decision
//! vectors. Before the adversarial phase the critic can be pre-trained to score survivors of
//! the last selection above the individuals that selection eliminated.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::nn::{adam_step, Activation, AdamConfig, AdamState, Gradients, Matrix, Mlp};
use crate::rng::RandomSource;
use crate::types::{Bounds, Individual, Population};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    StandardNormal,
    /// Uniform on `[-1, 1]`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GanConfig {
    /// Adversarial epochs per generation; each is `critic_steps` critic updates followed
    /// by one generator update.
    pub epochs: usize,
    pub critic_steps: usize,
    /// Upper bound on the minibatch size; the effective size is `min(batch_size, |real|)`.
    pub batch_size: usize,
    /// Gradient-penalty coefficient.
    pub lambda_gp: f64,
    /// Critic pre-training epochs; one epoch is one pass over the survivors in minibatches.
    pub pretrain_epochs: usize,
    pub latent_dim: usize,
    pub hidden: usize,
    /// Critic optimiser; also used for pre-training.
    pub adam: AdamConfig,
    /// Generator optimiser; identical to `adam` except for a smaller learning rate.
    pub generator_adam: AdamConfig,
    pub noise: NoiseKind,
    /// Keep both networks across generations instead of reinitialising them.
    pub warm_start: bool,
}

impl Default for GanConfig {
    fn default() -> Self {
        Self {
            epochs: 40,
            critic_steps: 5,
            batch_size: 32,
            lambda_gp: 10.0,
            pretrain_epochs: 10,
            latent_dim: 16,
            hidden: 64,
            adam: AdamConfig::default(),
            generator_adam: AdamConfig {
                learning_rate: 2e-4,
                ..AdamConfig::default()
            },
            noise: NoiseKind::StandardNormal,
            warm_start: true,
        }
    }
}

impl GanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.critic_steps == 0
            || self.batch_size == 0
            || self.latent_dim == 0
            || self.hidden == 0
        {
            return Err(Error::config(
                "GAN critic steps, batch size, latent and hidden widths must be positive",
            ));
        }
        if !(self.lambda_gp >= 0.0 && self.lambda_gp.is_finite()) {
            return Err(Error::config(alloc::format!(
                "gradient-penalty weight must be >= 0, got {}",
                self.lambda_gp
            )));
        }
        for a in [self.adam, self.generator_adam] {
            if !(a.learning_rate > 0.0
                && (0.0..1.0).contains(&a.beta1)
                && (0.0..1.0).contains(&a.beta2)
                && a.epsilon > 0.0)
            {
                return Err(Error::config("invalid Adam settings"));
            }
        }
        Ok(())
    }
}

/// Survivors (`real`) and eliminated individuals (`bad`) in normalised coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingCorpus {
    pub real: Matrix,
    pub bad: Matrix,
}

impl TrainingCorpus {
    pub fn new(real: Matrix, bad: Matrix) -> Result<Self> {
        if real.rows() == 0 {
            return Err(Error::Empty("real training data"));
        }
        if bad.rows() > 0 && bad.cols() != real.cols() {
            return Err(Error::shape("real and bad data differ in width"));
        }
        Ok(Self { real, bad })
    }

    /// Normalises the decision vectors of `good` and `bad` into `[-1, 1]^n`.
    pub fn from_populations(good: &Population, bad: &Population, bounds: &Bounds) -> Result<Self> {
        let norm = |p: &Population| -> Result<Matrix> {
            if p.is_empty() {
                return Ok(Matrix::zeros(0, bounds.len()));
            }
            let rows: Vec<Vec<f64>> = p
                .members
                .iter()
                .map(|m| normalize_to_net(&m.x, bounds))
                .collect();
            Matrix::from_rows(&rows)
        };
        Self::new(norm(good)?, norm(bad)?)
    }
}

/// Affine map of `[lower_i, upper_i]` onto `[-1, 1]`.
pub fn normalize_to_net(x: &[f64], bounds: &Bounds) -> Vec<f64> {
    x.iter()
        .zip(bounds.lower().iter().zip(bounds.upper()))
        .map(|(v, (l, u))| 2.0 * (v - l) / (u - l) - 1.0)
        .collect()
}

/// Inverse of [`normalize_to_net`], clamped into the box.
pub fn denormalize_from_net(y: &[f64], bounds: &Bounds) -> Vec<f64> {
    y.iter()
        .zip(bounds.lower().iter().zip(bounds.upper()))
        .map(|(v, (l, u))| (l + (v + 1.0) * 0.5 * (u - l)).clamp(*l, *u))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLoss {
    pub epoch: usize,
    /// Critic loss of the last critic step in the epoch, penalty included.
    pub critic_loss: f64,
    pub gen_loss: f64,
    /// `mean D(real) - mean D(G(z))` at the last critic step.
    pub wasserstein: f64,
    /// Unweighted gradient penalty at the last critic step.
    pub penalty: f64,
}

/// Generator, critic and their optimiser states.
#[derive(Debug, Clone, PartialEq)]
pub struct Wgan {
    pub generator: Mlp,
    pub critic: Mlp,
    pub gen_opt: AdamState,
    pub critic_opt: AdamState,
    pub config: GanConfig,
}

impl Wgan {
    /// Fresh `latent -> hidden -> hidden -> n` generator and `n -> hidden -> hidden -> 1` critic.
    pub fn new(n: usize, config: GanConfig, rng: &mut RandomSource) -> Result<Self> {
        config.validate()?;
        let h = config.hidden;
        let generator = Mlp::new(&[config.latent_dim, h, h, n], Activation::Tanh, rng)?;
        let critic = Mlp::new(&[n, h, h, 1], Activation::Linear, rng)?;
        Ok(Self {
            gen_opt: AdamState::new(&generator, config.generator_adam),
            critic_opt: AdamState::new(&critic, config.adam),
            generator,
            critic,
            config,
        })
    }

    pub fn dim(&self) -> usize {
        self.critic.inputs()
    }

    fn noise(&self, rows: usize, rng: &mut RandomSource) -> Matrix {
        let cols = self.config.latent_dim;
        let data = (0..rows * cols)
            .map(|_| match self.config.noise {
                NoiseKind::StandardNormal => rng.standard_normal(),
                NoiseKind::Uniform => 2.0 * rng.uniform() - 1.0,
            })
            .collect();
        Matrix::from_vec(rows, cols, data).expect("sized by construction")
    }

    fn check_corpus(&self, corpus: &TrainingCorpus) -> Result<()> {
        if corpus.real.cols() != self.dim() {
            return Err(Error::shape(alloc::format!(
                "corpus has {} columns, networks expect {}",
                corpus.real.cols(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Trains the critic alone to rank survivors above eliminated individuals, minimising
    /// `mean D(bad) - mean D(good) + lambda * GP` at interpolates between the two sets.
    /// Does nothing when there is no bad data.
    pub fn pretrain_discriminator(
        &mut self,
        corpus: &TrainingCorpus,
        rng: &mut RandomSource,
    ) -> Result<()> {
        self.check_corpus(corpus)?;
        if corpus.bad.rows() == 0 || self.config.pretrain_epochs == 0 {
            return Ok(());
        }
        let batch = self.config.batch_size.min(corpus.real.rows());
        let steps = corpus.real.rows().div_ceil(batch);
        for epoch in 0..self.config.pretrain_epochs {
            for _ in 0..steps {
                let good = sample_rows(&corpus.real, batch, rng);
                let bad = sample_rows(&corpus.bad, batch, rng);
                let (loss, ..) = self.critic_step(&good, &bad, rng)?;
                if !loss.is_finite() {
                    return Err(Error::Training {
                        epoch,
                        what: alloc::format!("pre-training loss is {loss}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// One critic update on `mean D(low) - mean D(high) + lambda * GP(interpolates)`.
    /// Returns `(loss, wasserstein, penalty)`, evaluated before the update.
    fn critic_step(
        &mut self,
        high: &Matrix,
        low: &Matrix,
        rng: &mut RandomSource,
    ) -> Result<(f64, f64, f64)> {
        let b = high.rows();
        let cols = high.cols();
        let mut mixed = Matrix::zeros(b, cols);
        for i in 0..b {
            let eps = rng.uniform();
            for ((m, h), l) in mixed.row_mut(i).iter_mut().zip(high.row(i)).zip(low.row(i)) {
                *m = eps * h + (1.0 - eps) * l;
            }
        }
        let hi_cache = self.critic.forward(high)?;
        let lo_cache = self.critic.forward(low)?;
        let mean_hi = mean(hi_cache.output().as_slice());
        let mean_lo = mean(lo_cache.output().as_slice());
        let hi_grad = Matrix::from_vec(b, 1, vec![-1.0 / b as f64; b])?;
        let lo_grad = Matrix::from_vec(low.rows(), 1, vec![1.0 / low.rows() as f64; low.rows()])?;
        let mut grads = self.critic.backward(&hi_cache, &hi_grad)?.params;
        grads.add_scaled(&self.critic.backward(&lo_cache, &lo_grad)?.params, 1.0);
        let mut penalty = 0.0;
        if self.config.lambda_gp > 0.0 {
            let (p, gp) = self.critic.gradient_penalty_backward(&mixed)?;
            grads.add_scaled(&gp, self.config.lambda_gp);
            penalty = p;
        }
        let loss = mean_lo - mean_hi + self.config.lambda_gp * penalty;
        adam_step(&mut self.critic, &grads, &mut self.critic_opt)?;
        Ok((loss, mean_hi - mean_lo, penalty))
    }

    /// One generator update on `-mean D(G(z))`; returns the loss before the update.
    fn generator_step(&mut self, batch: usize, rng: &mut RandomSource) -> Result<f64> {
        let z = self.noise(batch, rng);
        let g_cache = self.generator.forward(&z)?;
        let d_cache = self.critic.forward(g_cache.output())?;
        let loss = -mean(d_cache.output().as_slice());
        let d_grad = Matrix::from_vec(batch, 1, vec![-1.0 / batch as f64; batch])?;
        let through_critic = self.critic.backward(&d_cache, &d_grad)?.input;
        let grads: Gradients = self.generator.backward(&g_cache, &through_critic)?.params;
        adam_step(&mut self.generator, &grads, &mut self.gen_opt)?;
        Ok(loss)
    }

    /// Adversarial training on the survivors; returns one loss record per epoch.
    pub fn train(
        &mut self,
        corpus: &TrainingCorpus,
        rng: &mut RandomSource,
    ) -> Result<Vec<EpochLoss>> {
        self.check_corpus(corpus)?;
        let batch = self.config.batch_size.min(corpus.real.rows());
        let mut trace = Vec::with_capacity(self.config.epochs);
        for epoch in 0..self.config.epochs {
            let mut last = (0.0, 0.0, 0.0);
            for _ in 0..self.config.critic_steps {
                let real = sample_rows(&corpus.real, batch, rng);
                let z = self.noise(batch, rng);
                let fake = self.generator.predict(&z)?;
                last = self
                    .critic_step(&real, &fake, rng)
                    .map_err(|e| at_epoch(e, epoch))?;
            }
            let gen_loss = self
                .generator_step(batch, rng)
                .map_err(|e| at_epoch(e, epoch))?;
            let (critic_loss, wasserstein, penalty) = last;
            let record = EpochLoss {
                epoch,
                critic_loss,
                gen_loss,
                wasserstein,
                penalty,
            };
            if ![critic_loss, gen_loss, wasserstein, penalty]
                .iter()
                .all(|v| v.is_finite())
            {
                return Err(Error::Training {
                    epoch,
                    what: alloc::format!("non-finite loss {record:?}"),
                });
            }
            trace.push(record);
        }
        Ok(trace)
    }

    /// Normalised generator samples, one row per draw.
    pub fn generate(&self, count: usize, rng: &mut RandomSource) -> Result<Matrix> {
        let z = self.noise(count, rng);
        self.generator.predict(&z)
    }

    /// `count` unevaluated individuals decoded from generator samples into the box.
    pub fn sample_offspring(
        &self,
        count: usize,
        bounds: &Bounds,
        rng: &mut RandomSource,
    ) -> Result<Population> {
        if bounds.len() != self.dim() {
            return Err(Error::shape("bounds and generator output differ in width"));
        }
        let y = self.generate(count, rng)?;
        let members = y
            .iter_rows()
            .map(|r| Individual::new(denormalize_from_net(r, bounds)))
            .collect();
        Ok(Population::new(members, 0))
    }
}

fn at_epoch(e: Error, epoch: usize) -> Error {
    match e {
        Error::Training { what, .. } => Error::Training { epoch, what },
        other => other,
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// `count` rows drawn uniformly with replacement.
fn sample_rows(m: &Matrix, count: usize, rng: &mut RandomSource) -> Matrix {
    let mut out = Matrix::zeros(count, m.cols());
    for i in 0..count {
        let j = rng.index(m.rows());
        out.row_mut(i).copy_from_slice(m.row(j));
    }
    out
}
