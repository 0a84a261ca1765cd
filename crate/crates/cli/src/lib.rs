//! Experiment harness for RVEA-WG and NSGA-II: configuration files, parallel repeated runs,
//! CSV summaries and per-run artefacts.

pub mod config;
pub mod error;
pub mod harness;
pub mod output;

pub use config::{Algorithm, Experiment, OutputOptions, RunConfig};
pub use error::{CliError, CliResult};
pub use harness::{execute_run, run_experiment, ExperimentResult, RunRecord, SummaryRow};
