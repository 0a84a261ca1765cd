//! Experiment configuration: flat `key = value` files, CLI overrides and sweep expansion.
//!
//! Blank lines and lines starting with `#` are ignored. The keys `problem`, `objectives`
//! and `algorithm` accept comma-separated lists; an experiment is the cartesian product of
//! those lists, in that nesting order.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rveawg_core::gan::{GanConfig, NoiseKind};
use rveawg_core::nsga2::Nsga2Config;
use rveawg_core::problems::{by_name, ProblemDef};
use rveawg_core::refvec::LatticeSpec;
use rveawg_core::rvea::RveaWgConfig;
use rveawg_core::variation::MutationConfig;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    RveaWg,
    Nsga2,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::RveaWg => "rvea-wg",
            Algorithm::Nsga2 => "nsga2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rvea-wg" | "rveawg" => Ok(Algorithm::RveaWg),
            "nsga2" | "nsga-ii" => Ok(Algorithm::Nsga2),
            other => Err(CliError::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Everything needed to repeat one (problem, M, algorithm) cell of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub problem: String,
    pub objectives: usize,
    /// `None` means the lattice size for `objectives`.
    pub pop_size: Option<usize>,
    pub generations: usize,
    pub alpha: f64,
    pub gan: GanConfig,
    pub mutation: MutationConfig,
    pub eta_c: f64,
    pub crossover_probability: f64,
    pub runs: usize,
    /// Run `k` uses seed `seed + k`, whatever the algorithm.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let nsga2 = Nsga2Config::default();
        Self {
            algorithm: Algorithm::RveaWg,
            problem: "dtlz2".into(),
            objectives: 3,
            pop_size: None,
            generations: 15,
            alpha: 2.0,
            gan: GanConfig::default(),
            mutation: MutationConfig::default(),
            eta_c: nsga2.eta_c,
            crossover_probability: nsga2.crossover_probability,
            runs: 10,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn lattice(&self) -> LatticeSpec {
        LatticeSpec::for_objectives(self.objectives)
    }

    pub fn population_size(&self) -> usize {
        self.pop_size
            .unwrap_or_else(|| self.lattice().size(self.objectives))
    }

    pub fn problem_def(&self) -> CliResult<ProblemDef> {
        by_name(&self.problem, self.objectives).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn rvea(&self) -> RveaWgConfig {
        RveaWgConfig {
            lattice: self.lattice(),
            generations: self.generations,
            alpha: self.alpha,
            gan: self.gan,
            mutation: self.mutation,
        }
    }

    pub fn nsga2(&self) -> Nsga2Config {
        Nsga2Config {
            crossover_probability: self.crossover_probability,
            eta_c: self.eta_c,
            mutation: self.mutation,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.problem_def()?;
        if self.runs == 0 {
            return Err(CliError::Config("runs must be at least 1".into()));
        }
        if !(self.eta_c > 0.0) || !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(CliError::Config(
                "eta_c must be positive and crossover_probability in [0, 1]".into(),
            ));
        }
        self.rvea()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let n = self.population_size();
        if n == 0 {
            return Err(CliError::Config("population size must be positive".into()));
        }
        if self.algorithm == Algorithm::RveaWg {
            let lattice = self.lattice().size(self.objectives);
            if n != lattice {
                return Err(CliError::Config(format!(
                    "rvea-wg with {} objectives uses {lattice} reference vectors, so pop_size must be {lattice} (got {n})",
                    self.objectives
                )));
            }
        }
        Ok(())
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let v = value.trim();
        match key {
            "algorithm" => self.algorithm = v.parse()?,
            "problem" => self.problem = v.to_ascii_lowercase(),
            "objectives" => self.objectives = parse(key, v)?,
            "pop_size" => {
                self.pop_size = if v == "auto" {
                    None
                } else {
                    Some(parse(key, v)?)
                }
            }
            "generations" => self.generations = parse(key, v)?,
            "alpha" => self.alpha = parse(key, v)?,
            "runs" => self.runs = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "epochs" => self.gan.epochs = parse(key, v)?,
            "critic_steps" => self.gan.critic_steps = parse(key, v)?,
            "batch_size" => self.gan.batch_size = parse(key, v)?,
            "lambda_gp" => self.gan.lambda_gp = parse(key, v)?,
            "pretrain_epochs" => self.gan.pretrain_epochs = parse(key, v)?,
            "latent_dim" => self.gan.latent_dim = parse(key, v)?,
            "hidden" => self.gan.hidden = parse(key, v)?,
            "learning_rate" => self.gan.adam.learning_rate = parse(key, v)?,
            "generator_learning_rate" => self.gan.generator_adam.learning_rate = parse(key, v)?,
            "beta1" => {
                self.gan.adam.beta1 = parse(key, v)?;
                self.gan.generator_adam.beta1 = self.gan.adam.beta1;
            }
            "beta2" => {
                self.gan.adam.beta2 = parse(key, v)?;
                self.gan.generator_adam.beta2 = self.gan.adam.beta2;
            }
            "noise" => {
                self.gan.noise = match v {
                    "normal" => NoiseKind::StandardNormal,
                    "uniform" => NoiseKind::Uniform,
                    _ => {
                        return Err(CliError::Config(format!(
                            "noise must be `normal` or `uniform`, got `{v}`"
                        )))
                    }
                }
            }
            "warm_start" => self.gan.warm_start = parse(key, v)?,
            "eta_m" => self.mutation.eta_m = parse(key, v)?,
            "p_m" => {
                self.mutation.p_m = if v == "auto" {
                    None
                } else {
                    Some(parse(key, v)?)
                }
            }
            "eta_c" => self.eta_c = parse(key, v)?,
            "crossover_probability" => self.crossover_probability = parse(key, v)?,
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Every field as `(key, value)`; feeding the pairs back through [`RunConfig::set`]
    /// reproduces the configuration exactly.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        vec![
            ("algorithm", self.algorithm.to_string()),
            ("problem", self.problem.clone()),
            ("objectives", self.objectives.to_string()),
            ("pop_size", opt(self.pop_size.map(|n| n.to_string()))),
            ("generations", self.generations.to_string()),
            ("alpha", self.alpha.to_string()),
            ("runs", self.runs.to_string()),
            ("seed", self.seed.to_string()),
            ("epochs", self.gan.epochs.to_string()),
            ("critic_steps", self.gan.critic_steps.to_string()),
            ("batch_size", self.gan.batch_size.to_string()),
            ("lambda_gp", self.gan.lambda_gp.to_string()),
            ("pretrain_epochs", self.gan.pretrain_epochs.to_string()),
            ("latent_dim", self.gan.latent_dim.to_string()),
            ("hidden", self.gan.hidden.to_string()),
            ("learning_rate", self.gan.adam.learning_rate.to_string()),
            (
                "generator_learning_rate",
                self.gan.generator_adam.learning_rate.to_string(),
            ),
            ("beta1", self.gan.adam.beta1.to_string()),
            ("beta2", self.gan.adam.beta2.to_string()),
            (
                "noise",
                match self.gan.noise {
                    NoiseKind::StandardNormal => "normal".into(),
                    NoiseKind::Uniform => "uniform".into(),
                },
            ),
            ("warm_start", self.gan.warm_start.to_string()),
            ("eta_m", self.mutation.eta_m.to_string()),
            ("p_m", opt(self.mutation.p_m.map(|p| p.to_string()))),
            ("eta_c", self.eta_c.to_string()),
            (
                "crossover_probability",
                self.crossover_probability.to_string(),
            ),
        ]
    }

    pub fn to_text(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for `{key}`")))
}

/// Where and what to write.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputOptions {
    pub out: PathBuf,
    /// Worker threads; `None` lets the pool decide.
    pub jobs: Option<usize>,
    pub dump_refvecs: bool,
    pub emit_plots: bool,
    pub dump_params: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            out: PathBuf::from("results"),
            jobs: None,
            dump_refvecs: false,
            emit_plots: false,
            dump_params: false,
        }
    }
}

impl OutputOptions {
    fn set(&mut self, key: &str, value: &str) -> CliResult<bool> {
        let v = value.trim();
        match key {
            "out" => self.out = PathBuf::from(v),
            "jobs" => self.jobs = Some(parse(key, v)?),
            "dump_refvecs" => self.dump_refvecs = parse(key, v)?,
            "emit_plots" => self.emit_plots = parse(key, v)?,
            "dump_params" => self.dump_params = parse(key, v)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// A fully expanded experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub configs: Vec<RunConfig>,
    pub output: OutputOptions,
}

/// `key = value` pairs in file order; rejects malformed lines and repeated keys.
pub fn parse_pairs(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected `key = value`", number + 1))
        })?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key", number + 1)));
        }
        if pairs.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Config(format!(
                "line {}: key `{key}` given twice",
                number + 1
            )));
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}

/// Replaces or appends each override.
pub fn merge_pairs(base: &mut Vec<(String, String)>, overrides: Vec<(String, String)>) {
    for (k, v) in overrides {
        match base.iter_mut().find(|(key, _)| *key == k) {
            Some(slot) => slot.1 = v,
            None => base.push((k, v)),
        }
    }
}

fn list(value: &str) -> Vec<&str> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Expands pairs into one [`RunConfig`] per (problem, objectives, algorithm) combination
/// and validates each of them.
pub fn build_experiment(pairs: &[(String, String)]) -> CliResult<Experiment> {
    let mut base = RunConfig::default();
    let mut output = OutputOptions::default();
    let mut problems = vec![base.problem.clone()];
    let mut objectives = vec![base.objectives.to_string()];
    let mut algorithms = vec![base.algorithm.to_string()];
    for (key, value) in pairs {
        match key.as_str() {
            "problem" => problems = list(value).into_iter().map(String::from).collect(),
            "objectives" => objectives = list(value).into_iter().map(String::from).collect(),
            "algorithm" => algorithms = list(value).into_iter().map(String::from).collect(),
            _ => {
                if !output.set(key, value)? {
                    base.set(key, value)?;
                }
            }
        }
    }
    if problems.is_empty() || objectives.is_empty() || algorithms.is_empty() {
        return Err(CliError::Config(
            "problem, objectives and algorithm lists must be non-empty".into(),
        ));
    }
    let mut configs = Vec::new();
    for p in &problems {
        for m in &objectives {
            for a in &algorithms {
                let mut cfg = base.clone();
                cfg.set("problem", p)?;
                cfg.set("objectives", m)?;
                cfg.set("algorithm", a)?;
                cfg.validate()?;
                configs.push(cfg);
            }
        }
    }
    Ok(Experiment { configs, output })
}
