//! Repeated runs, executed in parallel and aggregated per (problem, M, algorithm).

use std::time::{Duration, Instant};

use rayon::prelude::*;
use rveawg_core::gan::EpochLoss;
use rveawg_core::metrics::aggregate_runs;
use rveawg_core::nn::Mlp;
use rveawg_core::nsga2::run_nsga2;
use rveawg_core::rvea::run_rvea_wg;
use rveawg_core::{Population, RandomSource};

use crate::config::{Algorithm, RunConfig};
use crate::error::{CliError, CliResult};

/// One finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub config: RunConfig,
    pub run_index: usize,
    pub seed: u64,
    /// IGD of the population after each generation.
    pub igd_trace: Vec<f64>,
    pub final_population: Population,
    pub evaluations: usize,
    /// `(generation, loss)` for every GAN epoch; empty for NSGA-II.
    pub gan_losses: Vec<(usize, EpochLoss)>,
    /// Final generator and critic of an RVEA-WG run.
    pub networks: Option<(Mlp, Mlp)>,
    pub duration: Duration,
}

impl RunRecord {
    pub fn final_igd(&self) -> f64 {
        *self.igd_trace.last().expect("at least one generation")
    }
}

/// Seed of run `run_index`; shared by every algorithm so that comparisons are paired.
pub fn run_seed(base: u64, run_index: usize) -> u64 {
    base.wrapping_add(run_index as u64)
}

pub fn execute_run(cfg: &RunConfig, run_index: usize) -> CliResult<RunRecord> {
    cfg.validate()?;
    let problem = cfg.problem_def()?;
    let reference = problem.reference_front();
    let seed = run_seed(cfg.seed, run_index);
    let start = Instant::now();
    let outcome = match cfg.algorithm {
        Algorithm::RveaWg => {
            run_rvea_wg(&problem, &cfg.rvea(), &reference, &RandomSource::new(seed))?
        }
        Algorithm::Nsga2 => run_nsga2(
            &problem,
            cfg.population_size(),
            cfg.generations,
            &cfg.nsga2(),
            &reference,
            &mut RandomSource::new(seed),
        )?,
    };
    Ok(RunRecord {
        config: cfg.clone(),
        run_index,
        seed,
        igd_trace: outcome.igd_trace,
        final_population: outcome.final_population,
        evaluations: outcome.evaluations,
        gan_losses: outcome.gan_losses,
        networks: outcome.networks,
        duration: start.elapsed(),
    })
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub objectives: usize,
    pub algorithm: Algorithm,
    pub runs: usize,
    /// Final IGD per run; `None` where the run failed.
    pub values: Vec<Option<f64>>,
    /// Statistics over the successful runs.
    pub mean: Option<f64>,
    pub std: Option<f64>,
    /// Smallest mean among the algorithms on the same problem and M.
    pub best: bool,
    pub status: String,
}

#[derive(Debug)]
pub struct ExperimentResult {
    pub rows: Vec<SummaryRow>,
    /// Per configuration, per run, in run order.
    pub records: Vec<Vec<CliResult<RunRecord>>>,
}

impl ExperimentResult {
    pub fn failed_runs(&self) -> usize {
        self.records.iter().flatten().filter(|r| r.is_err()).count()
    }
}

fn summarize(cfg: &RunConfig, runs: &[CliResult<RunRecord>]) -> SummaryRow {
    let values: Vec<Option<f64>> = runs
        .iter()
        .map(|r| r.as_ref().ok().map(RunRecord::final_igd))
        .collect();
    let ok: Vec<f64> = values.iter().flatten().copied().collect();
    let stats = aggregate_runs(&ok).ok();
    let failures: Vec<String> = runs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().err().map(|e| format!("run {i}: {e}")))
        .collect();
    let status = if failures.is_empty() {
        "ok".to_string()
    } else {
        format!(
            "{} of {} runs failed; {}",
            failures.len(),
            runs.len(),
            failures[0]
        )
    };
    SummaryRow {
        problem: cfg.problem.clone(),
        objectives: cfg.objectives,
        algorithm: cfg.algorithm,
        runs: runs.len(),
        values,
        mean: stats.map(|s| s.mean),
        std: stats.map(|s| s.std),
        best: false,
        status,
    }
}

fn mark_best(rows: &mut [SummaryRow]) {
    for i in 0..rows.len() {
        let Some(mean) = rows[i].mean else { continue };
        rows[i].best = rows
            .iter()
            .filter(|r| r.problem == rows[i].problem && r.objectives == rows[i].objectives)
            .all(|r| r.mean.is_none_or(|other| mean <= other));
    }
}

/// Runs every configuration `runs` times on up to `jobs` threads. Failed runs are kept
/// as errors in their slot; the other runs and rows are unaffected.
pub fn run_experiment(configs: &[RunConfig], jobs: Option<usize>) -> CliResult<ExperimentResult> {
    if configs.is_empty() {
        return Err(CliError::Config("experiment has no configurations".into()));
    }
    let tasks: Vec<(usize, usize)> = configs
        .iter()
        .enumerate()
        .flat_map(|(c, cfg)| (0..cfg.runs).map(move |r| (c, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let mut finished: Vec<CliResult<RunRecord>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(c, r)| execute_run(&configs[c], r))
            .collect()
    });

    let mut records: Vec<Vec<CliResult<RunRecord>>> = Vec::with_capacity(configs.len());
    for cfg in configs.iter().rev() {
        let tail = finished.split_off(finished.len() - cfg.runs);
        records.push(tail);
    }
    records.reverse();
    let mut rows: Vec<SummaryRow> = configs
        .iter()
        .zip(&records)
        .map(|(c, r)| summarize(c, r))
        .collect();
    mark_best(&mut rows);
    Ok(ExperimentResult { rows, records })
}
