//! CSV and binary artefacts.
//!
//! ```text
//! OUT/summary.csv                      one row per (problem, M, algorithm)
//! OUT/timing.csv                       wall-clock seconds per run
//! OUT/refvecs_m<M>.csv                 initial unit reference vectors (--dump-refvecs)
//! OUT/runs/<problem>_m<M>_<alg>/run_<k>/
//!     config.txt                       re-runnable snapshot of this single run
//!     gan_loss.csv                     per-epoch GAN losses (rvea-wg)
//!     igd_trace.csv, objectives.csv,
//!     decisions.csv                    (--emit-plots)
//!     generator.bin, critic.bin        little-endian f64 parameters (--dump-params)
//!     error.txt                        instead of the above when the run failed
//! ```
//!
//! Summary numbers use six significant digits; per-run files use the shortest
//! representation that parses back to the same `f64`.

use std::fs;
use std::path::{Path, PathBuf};

use rveawg_core::gan::EpochLoss;
use rveawg_core::rvea::reference_vectors;

use crate::config::{Algorithm, OutputOptions, RunConfig};
use crate::error::{CliError, CliResult};
use crate::harness::{ExperimentResult, RunRecord, SummaryRow};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMING_FILE: &str = "timing.csv";

/// Six significant digits in scientific notation.
pub fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

fn exact(v: f64) -> String {
    format!("{v:e}")
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))
}

fn write_rows(
    path: &Path,
    header: &[String],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> CliResult<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| CliError::csv(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn read_rows(path: &Path) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::csv(path, e))?;
    let header = r
        .headers()
        .map_err(|e| CliError::csv(path, e))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(
            rec.map_err(|e| CliError::csv(path, e))?
                .iter()
                .map(String::from)
                .collect(),
        );
    }
    Ok((header, rows))
}

fn parse_field<T: std::str::FromStr>(path: &Path, field: &str) -> CliResult<T> {
    field.parse().map_err(|_| CliError::Parse {
        path: path.to_path_buf(),
        what: format!("bad field `{field}`"),
    })
}

fn parse_opt(path: &Path, field: &str) -> CliResult<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_field(path, field).map(Some)
    }
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> CliResult<()> {
    let k = rows.iter().map(|r| r.values.len()).max().unwrap_or(0);
    let mut header: Vec<String> = ["problem", "M", "algorithm", "runs", "mean_igd", "std_igd"]
        .map(String::from)
        .into();
    header.extend((0..k).map(|i| format!("run_{i}")));
    header.extend(["best", "status"].map(String::from));
    let cell = |v: Option<f64>| v.map(sci).unwrap_or_default();
    write_rows(
        path,
        &header,
        rows.iter().map(|r| {
            let mut line = vec![
                r.problem.clone(),
                r.objectives.to_string(),
                r.algorithm.to_string(),
                r.runs.to_string(),
                cell(r.mean),
                cell(r.std),
            ];
            line.extend((0..k).map(|i| cell(r.values.get(i).copied().flatten())));
            line.push(r.best.to_string());
            line.push(r.status.clone());
            line
        }),
    )
}

pub fn read_summary(path: &Path) -> CliResult<Vec<SummaryRow>> {
    let (header, rows) = read_rows(path)?;
    let k = header.iter().filter(|h| h.starts_with("run_")).count();
    let bad = |what: &str| CliError::Parse {
        path: path.to_path_buf(),
        what: what.into(),
    };
    if header.len() != k + 8 {
        return Err(bad("unexpected summary header"));
    }
    rows.into_iter()
        .map(|f| {
            if f.len() != k + 8 {
                return Err(bad("row width differs from header"));
            }
            let runs: usize = parse_field(path, &f[3])?;
            let values = f[6..6 + k.min(runs)]
                .iter()
                .map(|v| parse_opt(path, v))
                .collect::<CliResult<_>>()?;
            Ok(SummaryRow {
                problem: f[0].clone(),
                objectives: parse_field(path, &f[1])?,
                algorithm: f[2]
                    .parse::<Algorithm>()
                    .map_err(|_| bad("unknown algorithm"))?,
                runs,
                mean: parse_opt(path, &f[4])?,
                std: parse_opt(path, &f[5])?,
                values,
                best: parse_field(path, &f[6 + k])?,
                status: f[7 + k].clone(),
            })
        })
        .collect()
}

pub fn write_igd_trace(path: &Path, trace: &[f64]) -> CliResult<()> {
    let header = ["generation", "igd"].map(String::from);
    write_rows(
        path,
        &header,
        trace
            .iter()
            .enumerate()
            .map(|(g, v)| vec![(g + 1).to_string(), exact(*v)]),
    )
}

pub fn read_igd_trace(path: &Path) -> CliResult<Vec<f64>> {
    let (_, rows) = read_rows(path)?;
    rows.iter().map(|r| parse_field(path, &r[1])).collect()
}

/// Rows of equal width with columns `<prefix>1 .. <prefix>w`.
pub fn write_matrix(path: &Path, prefix: &str, rows: &[&[f64]]) -> CliResult<()> {
    let width = rows.first().map_or(0, |r| r.len());
    let header: Vec<String> = (1..=width).map(|i| format!("{prefix}{i}")).collect();
    write_rows(
        path,
        &header,
        rows.iter().map(|r| r.iter().map(|v| exact(*v)).collect()),
    )
}

pub fn read_matrix(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let (_, rows) = read_rows(path)?;
    rows.iter()
        .map(|r| r.iter().map(|v| parse_field(path, v)).collect())
        .collect()
}

pub fn write_gan_losses(path: &Path, losses: &[(usize, EpochLoss)]) -> CliResult<()> {
    let header = [
        "generation",
        "epoch",
        "critic_loss",
        "gen_loss",
        "wasserstein_estimate",
        "penalty",
    ]
    .map(String::from);
    write_rows(
        path,
        &header,
        losses.iter().map(|(g, l)| {
            vec![
                (g + 1).to_string(),
                (l.epoch + 1).to_string(),
                exact(l.critic_loss),
                exact(l.gen_loss),
                exact(l.wasserstein),
                exact(l.penalty),
            ]
        }),
    )
}

pub fn read_gan_losses(path: &Path) -> CliResult<Vec<(usize, EpochLoss)>> {
    let (_, rows) = read_rows(path)?;
    rows.iter()
        .map(|r| {
            let g: usize = parse_field(path, &r[0])?;
            let e: usize = parse_field(path, &r[1])?;
            Ok((
                g - 1,
                EpochLoss {
                    epoch: e - 1,
                    critic_loss: parse_field(path, &r[2])?,
                    gen_loss: parse_field(path, &r[3])?,
                    wasserstein: parse_field(path, &r[4])?,
                    penalty: parse_field(path, &r[5])?,
                },
            ))
        })
        .collect()
}

/// Directory of run `run_index` of `cfg` under `out`.
pub fn run_dir(out: &Path, cfg: &RunConfig, run_index: usize) -> PathBuf {
    out.join("runs")
        .join(format!(
            "{}_m{}_{}",
            cfg.problem, cfg.objectives, cfg.algorithm
        ))
        .join(format!("run_{run_index}"))
}

/// Snapshot that repeats exactly this run when fed back to the CLI.
pub fn single_run_config(record: &RunRecord) -> RunConfig {
    RunConfig {
        runs: 1,
        seed: record.seed,
        ..record.config.clone()
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_record(dir: &Path, record: &RunRecord, opts: &OutputOptions) -> CliResult<()> {
    create_dir(dir)?;
    write_text(
        &dir.join("config.txt"),
        &single_run_config(record).to_text(),
    )?;
    if record.config.algorithm == Algorithm::RveaWg {
        write_gan_losses(&dir.join("gan_loss.csv"), &record.gan_losses)?;
    }
    if opts.emit_plots {
        write_igd_trace(&dir.join("igd_trace.csv"), &record.igd_trace)?;
        let members = &record.final_population.members;
        let f: Vec<&[f64]> = members.iter().filter_map(|m| m.objectives()).collect();
        write_matrix(&dir.join("objectives.csv"), "f", &f)?;
        let x: Vec<&[f64]> = members.iter().map(|m| &m.x[..]).collect();
        write_matrix(&dir.join("decisions.csv"), "x", &x)?;
    }
    if opts.dump_params {
        if let Some((generator, critic)) = &record.networks {
            for (name, net) in [("generator.bin", generator), ("critic.bin", critic)] {
                let path = dir.join(name);
                fs::write(&path, net.to_le_bytes()).map_err(|e| CliError::io(&path, e))?;
            }
        }
    }
    Ok(())
}

pub fn write_refvecs(path: &Path, m: usize, cfg: &RunConfig) -> CliResult<()> {
    let refs = reference_vectors(m, cfg.lattice())?;
    let rows: Vec<&[f64]> = refs.current().iter().map(Vec::as_slice).collect();
    write_matrix(path, "w", &rows)
}

/// Writes the summary, the timing table and every per-run artefact.
pub fn write_experiment(
    result: &ExperimentResult,
    configs: &[RunConfig],
    opts: &OutputOptions,
) -> CliResult<()> {
    create_dir(&opts.out)?;
    write_summary(&opts.out.join(SUMMARY_FILE), &result.rows)?;

    let mut timing = Vec::new();
    for (cfg, runs) in configs.iter().zip(&result.records) {
        for (k, run) in runs.iter().enumerate() {
            let dir = run_dir(&opts.out, cfg, k);
            match run {
                Ok(record) => {
                    write_record(&dir, record, opts)?;
                    timing.push(vec![
                        cfg.problem.clone(),
                        cfg.objectives.to_string(),
                        cfg.algorithm.to_string(),
                        k.to_string(),
                        record.seed.to_string(),
                        record.evaluations.to_string(),
                        format!("{:.6}", record.duration.as_secs_f64()),
                    ]);
                }
                Err(e) => {
                    create_dir(&dir)?;
                    write_text(&dir.join("error.txt"), &format!("{e}\n"))?;
                }
            }
        }
    }
    let header = [
        "problem",
        "M",
        "algorithm",
        "run",
        "seed",
        "evaluations",
        "seconds",
    ]
    .map(String::from);
    write_rows(&opts.out.join(TIMING_FILE), &header, timing)?;

    if opts.dump_refvecs {
        let mut done = Vec::new();
        for cfg in configs.iter().filter(|c| c.algorithm == Algorithm::RveaWg) {
            if !done.contains(&cfg.objectives) {
                write_refvecs(
                    &opts.out.join(format!("refvecs_m{}.csv", cfg.objectives)),
                    cfg.objectives,
                    cfg,
                )?;
                done.push(cfg.objectives);
            }
        }
    }
    Ok(())
}
