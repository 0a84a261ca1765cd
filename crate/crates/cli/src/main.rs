use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rveawg::config::{build_experiment, merge_pairs, parse_pairs};
use rveawg::output::write_experiment;
use rveawg::{run_experiment, CliError, CliResult, Experiment};

/// RVEA-WG: reference-vector-guided evolution with WGAN-GP offspring.
#[derive(Parser)]
#[command(name = "rveawg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated runs of one algorithm on one problem.
    Run(RunArgs),
    /// Every (problem, M, algorithm) combination listed in a config file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Optional `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// rvea-wg or nsga2.
    #[arg(long)]
    algorithm: Option<String>,
    /// dtlz1..dtlz4 or lsmop1..lsmop3.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    objectives: Option<usize>,
    /// Defaults to the reference-vector count for M; must equal it for rvea-wg.
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// GAN training epochs per generation.
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    /// Base seed; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for independent runs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the initial reference vectors.
    #[arg(long)]
    dump_refvecs: bool,
    /// Write per-run IGD traces and final populations.
    #[arg(long)]
    emit_plots: bool,
    /// Write final generator and critic parameters as little-endian f64.
    #[arg(long)]
    dump_params: bool,
}

fn push<T: ToString>(pairs: &mut Vec<(String, String)>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        pairs.push((key.to_string(), v.to_string()));
    }
}

impl OutputArgs {
    fn pairs(&self, pairs: &mut Vec<(String, String)>) {
        push(
            pairs,
            "out",
            self.out.as_ref().map(|p| p.display().to_string()),
        );
        push(pairs, "jobs", self.jobs);
        for (key, set) in [
            ("dump_refvecs", self.dump_refvecs),
            ("emit_plots", self.emit_plots),
            ("dump_params", self.dump_params),
        ] {
            if set {
                pairs.push((key.to_string(), "true".to_string()));
            }
        }
    }
}

fn load(path: Option<&PathBuf>, overrides: Vec<(String, String)>) -> CliResult<Experiment> {
    let mut pairs = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            parse_pairs(&text)?
        }
        None => Vec::new(),
    };
    merge_pairs(&mut pairs, overrides);
    build_experiment(&pairs)
}

fn experiment(cli: &Cli) -> CliResult<Experiment> {
    let mut o = Vec::new();
    match &cli.command {
        Command::Run(a) => {
            push(&mut o, "algorithm", a.algorithm.as_ref());
            push(&mut o, "problem", a.problem.as_ref());
            push(&mut o, "objectives", a.objectives);
            push(&mut o, "pop_size", a.pop_size);
            push(&mut o, "generations", a.generations);
            push(&mut o, "epochs", a.epochs);
            push(&mut o, "runs", a.runs);
            push(&mut o, "seed", a.seed);
            push(&mut o, "alpha", a.alpha);
            a.output.pairs(&mut o);
            load(a.config.as_ref(), o)
        }
        Command::Sweep(a) => {
            push(&mut o, "runs", a.runs);
            push(&mut o, "seed", a.seed);
            a.output.pairs(&mut o);
            load(Some(&a.config), o)
        }
    }
}

fn execute(cli: &Cli) -> CliResult<usize> {
    let exp = experiment(cli)?;
    let result = run_experiment(&exp.configs, exp.output.jobs)?;
    write_experiment(&result, &exp.configs, &exp.output)?;
    for row in &result.rows {
        let mean = row
            .mean
            .map(rveawg::output::sci)
            .unwrap_or_else(|| "-".into());
        println!(
            "{:<8} M={:<3} {:<8} mean IGD {}{}",
            row.problem,
            row.objectives,
            row.algorithm,
            mean,
            if row.best { " *" } else { "" }
        );
    }
    Ok(result.failed_runs())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("rveawg: {failed} run(s) failed; see error.txt in their run directories");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("rveawg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
