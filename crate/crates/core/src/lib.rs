//! Many-objective optimisation by reference-vector-guided selection, with offspring drawn
//! from a Wasserstein GAN (gradient-penalty variant) trained on the surviving individuals.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure computation:
//! the std companion crate `rveawg` owns configuration files, CSV output and the CLI.
//!
//! Module map:
//!
//! * [`types`], [`rng`], [`error`]: decision/objective vectors, populations, the seeded
//!   random source and the crate error type.
//! * [`refvec`]: simplex-lattice weights, unit reference vectors and their adaptation.
//! * [`selection`]: translation, partition, angle-penalised distance and elitism.
//! * [`nn`]: a small fully connected network with backprop, input gradients, the
//!   gradient-penalty double backprop and Adam.
//! * [`gan`]: critic pre-training, adversarial training and offspring sampling.
//! * [`variation`]: polynomial mutation and simulated binary crossover.
//! * [`problems`]: DTLZ1-4 and LSMOP1-3 with Pareto-front samplers.
//! * [`nsga2`]: the NSGA-II comparison algorithm.
//! * [`metrics`]: IGD and run statistics.
//! * [`rvea`]: the RVEA-WG main loop.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod gan;
pub mod metrics;
pub mod nn;
pub mod nsga2;
pub mod problems;
pub mod refvec;
pub mod rng;
pub mod rvea;
pub mod selection;
pub mod types;
pub mod variation;

pub use error::{Error, Result};
pub use problems::ProblemDef;
pub use rng::RandomSource;
pub use types::{Bounds, DecisionVector, Individual, ObjectiveVector, Population};

/// Outcome of one optimisation run, shared by RVEA-WG and NSGA-II.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// IGD of the population after each generation; length equals the generation budget.
    pub igd_trace: alloc::vec::Vec<f64>,
    pub final_population: Population,
    /// Number of objective-function evaluations spent.
    pub evaluations: usize,
    /// Per-epoch GAN losses tagged with the generation they belong to (empty for NSGA-II).
    pub gan_losses: alloc::vec::Vec<(usize, gan::EpochLoss)>,
    /// Generator and critic at the end of the run (RVEA-WG only).
    pub networks: Option<(nn::Mlp, nn::Mlp)>,
}
