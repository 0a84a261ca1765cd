//! RVEA-WG main loop: reference-vector-guided selection with WGAN-GP offspring.
//!
//! Each generation pre-trains the critic on the previous survivors versus the individuals
//! that selection eliminated, trains the GAN on the survivors, samples `N` offspring,
//! applies polynomial mutation, merges them with the parents, selects one individual per
//! reference vector and adapts the reference vectors to the merged population's ranges.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gan::{GanConfig, TrainingCorpus, Wgan};
use crate::metrics::igd;
use crate::problems::ProblemDef;
use crate::refvec::{to_unit_vectors, LatticeSpec, ReferenceVectorSet};
use crate::rng::RandomSource;
use crate::selection::elitism_select;
use crate::types::{evaluate, init_population, ObjectiveVector, Population};
use crate::variation::{polynomial_mutation, MutationConfig};
use crate::RunOutcome;

/// Stream ids carved out of a run's seed.
const STREAM_INIT: u64 = 1;
const STREAM_NETWORKS: u64 = 2;
const STREAM_TRAINING: u64 = 3;
const STREAM_VARIATION: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RveaWgConfig {
    pub lattice: LatticeSpec,
    pub generations: usize,
    /// Rate of change of the angle penalty.
    pub alpha: f64,
    pub gan: GanConfig,
    pub mutation: MutationConfig,
}

impl RveaWgConfig {
    pub fn for_objectives(m: usize) -> Self {
        Self {
            lattice: LatticeSpec::for_objectives(m),
            generations: 15,
            alpha: 2.0,
            gan: GanConfig::default(),
            mutation: MutationConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 {
            return Err(Error::config("generation budget must be at least 1"));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(alloc::format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        self.gan.validate()?;
        self.mutation.validate()
    }
}

/// Unit reference vectors for `m` objectives under `lattice`.
pub fn reference_vectors(m: usize, lattice: LatticeSpec) -> Result<ReferenceVectorSet> {
    to_unit_vectors(&lattice.weights(m)?)
}

/// Runs RVEA-WG; the population size equals the number of reference vectors.
pub fn run_rvea_wg(
    problem: &ProblemDef,
    cfg: &RveaWgConfig,
    reference: &[ObjectiveVector],
    rng: &RandomSource,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let m = problem.num_objectives();
    let bounds = problem.bounds();
    let mut refs = reference_vectors(m, cfg.lattice)?;
    let size = refs.len();

    let mut init_rng = rng.fork(STREAM_INIT);
    let mut net_rng = rng.fork(STREAM_NETWORKS);
    let mut train_rng = rng.fork(STREAM_TRAINING);
    let mut var_rng = rng.fork(STREAM_VARIATION);

    let mut parents = init_population(problem, size, &mut init_rng)?;
    let mut evaluations = evaluate(&mut parents, problem)?;
    let mut eliminated = Population::default();
    let mut gan = Wgan::new(problem.num_variables(), cfg.gan, &mut net_rng)?;

    let mut igd_trace = Vec::with_capacity(cfg.generations);
    let mut gan_losses = Vec::new();
    for t in 0..cfg.generations {
        if !cfg.gan.warm_start && t > 0 {
            gan = Wgan::new(problem.num_variables(), cfg.gan, &mut net_rng)?;
        }
        let corpus = TrainingCorpus::from_populations(&parents, &eliminated, bounds)?;
        gan.pretrain_discriminator(&corpus, &mut train_rng)?;
        let losses = gan.train(&corpus, &mut train_rng)?;
        gan_losses.extend(losses.into_iter().map(|l| (t, l)));

        let mut offspring = gan.sample_offspring(size, bounds, &mut train_rng)?;
        for child in &mut offspring.members {
            child.x = polynomial_mutation(&child.x, bounds, &cfg.mutation, &mut var_rng);
        }
        evaluations += evaluate(&mut offspring, problem)?;

        let mut union = parents;
        union.extend(offspring);
        let selection = elitism_select(&union, &refs, t, cfg.generations, cfg.alpha)?;
        refs = refs.adapt(&selection.z_max, &selection.z_min)?;
        parents = selection.survivors;
        parents.generation = t + 1;
        eliminated = selection.eliminated;
        igd_trace.push(igd(reference, &parents.objectives()?)?.value);
    }
    Ok(RunOutcome {
        igd_trace,
        final_population: parents,
        evaluations,
        gan_losses,
        networks: Some((gan.generator, gan.critic)),
    })
}
