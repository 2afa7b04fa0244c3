//! Command-line front end: single runs, sweeps, exhaustive verification and
//! trace replay.
//!
//! Exit codes: 0 when everything dispersed or passed, 1 on bad input or a
//! search guard, 2 when a run hit its round limit or a check failed.

pub mod spec;
pub mod trace;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{AdversaryKind, Mode};
use crate::algorithms::PolicyKind;
use crate::error::{ConfigError, ScenarioError, VerifyError};
use crate::scheduler::{default_max_rounds, Outcome, RunResult, Simulation};
use crate::verifier::{proven_bound, verify_impossibility, verify_worst_case, SearchOptions};

pub use spec::{default_mode, ExperimentSpec, InitialConfig, Visibility};
pub use trace::{read_records, replay, write_records, Replay, TraceRecord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_FAILED: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("replay: {0}")]
    Replay(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Runs one simulation and returns its result with the trace records.
pub fn run_spec(spec: &ExperimentSpec) -> Result<(RunResult, Vec<TraceRecord>), CliError> {
    let world = spec.world(spec.seed)?;
    let k = spec.k.radius(spec.n);
    let sim = Simulation::new(
        world.clone(),
        spec.policy,
        spec.adversary.build(spec.seed),
        k,
        spec.mode,
    )?;
    let result = sim.run(spec.max_rounds)?;
    let records = trace::build_records(spec, &world, &result);
    Ok((result, records))
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub policy: String,
    pub adversary: String,
    pub seed: u64,
    pub rounds: usize,
    pub bound: Option<usize>,
    pub pass: bool,
}

/// Runs `template.trials` seeds, starting at `template.seed`, for every ring
/// size in `ns`. Rows come back in input order whatever the thread count.
pub fn sweep(template: &ExperimentSpec, ns: &[usize]) -> Result<Vec<SweepRow>, CliError> {
    let jobs: Vec<(usize, u64)> = ns
        .iter()
        .flat_map(|&n| (0..template.trials as u64).map(move |t| (n, template.seed + t)))
        .collect();
    jobs.par_iter()
        .map(|&(n, seed)| {
            let mut spec = template.clone();
            spec.n = n;
            spec.seed = seed;
            spec.max_rounds = template
                .max_rounds
                .max(proven_bound(spec.policy, n).unwrap_or(0));
            let (result, _) = run_spec(&spec)?;
            let bound = proven_bound(spec.policy, n);
            let pass = result.outcome == Outcome::Dispersed
                && result.violations.is_empty()
                && bound.is_none_or(|b| result.rounds <= b);
            Ok(SweepRow {
                n,
                policy: spec.policy.id(),
                adversary: spec.adversary.id().into(),
                seed,
                rounds: result.rounds,
                bound,
                pass,
            })
        })
        .collect()
}

/// Parses ring sizes: `5`, `3,5,7`, `4-64`, or `3-17/2` for every second size.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || {
        CliError::Spec(format!(
            "ring sizes must look like 5, 3,5,7, 4-64 or 3-17/2, got `{s}`"
        ))
    };
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (range, step) = match part.split_once('/') {
            Some((r, st)) => (r, st.parse::<usize>().map_err(|_| bad())?),
            None => (part, 1),
        };
        if step == 0 {
            return Err(bad());
        }
        match range.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.parse().map_err(|_| bad())?;
                out.extend((a..=b).step_by(step));
            }
            None => out.push(range.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "ring-dispersion",
    version,
    about = "Dispersion of mobile robots on dynamic rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its trace.
    Run(ExperimentArgs),
    /// Run many seeds over a range of ring sizes and tabulate the rounds.
    Sweep(ExperimentArgs),
    /// Check a round bound, or an impossibility claim, exhaustively.
    Verify(VerifyArgs),
    /// Re-run a trace file and compare it with the recording.
    Replay { trace: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Ring size; sweeps also take lists and ranges such as 3-17/2.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, default_value = "vp-chain")]
    pub policy: PolicyKind,
    #[arg(long, default_value = "random")]
    pub adversary: AdversaryKind,
    /// none, vp, 1i or combined. Defaults to what the policy is built for.
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Visibility radius or `full`.
    #[arg(long)]
    pub k: Option<Visibility>,
    /// Robots per node such as 2,1,0, `all-on-one` or `random`.
    #[arg(long)]
    pub config: Option<InitialConfig>,
    /// Labels in placement order, comma separated.
    #[arg(long)]
    pub labels: Option<String>,
    /// One bit per robot in label order, 1 for reversed.
    #[arg(long)]
    pub orientations: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Read the experiment from a JSON file instead of flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "vp-chain")]
    pub policy: PolicyKind,
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Defaults to the bound the policy is proven to meet.
    #[arg(long)]
    pub bound: Option<usize>,
    /// Check that no no-visibility rule beats the given killer adversary.
    #[arg(long)]
    pub impossibility: bool,
    #[arg(long, default_value = "one-interval-killer")]
    pub adversary: AdversaryKind,
    #[arg(long, default_value_t = 200)]
    pub horizon: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ExperimentArgs {
    /// The spec the flags describe, leaving `n` for the caller when sizes are
    /// given as a range.
    pub fn to_spec(&self, n: usize) -> Result<ExperimentSpec, CliError> {
        if let Some(path) = &self.spec {
            let mut spec: ExperimentSpec =
                serde_json::from_reader(BufReader::new(File::open(path)?))?;
            if self.out.is_some() {
                spec.out.clone_from(&self.out);
            }
            return Ok(spec);
        }
        let mut spec = ExperimentSpec::new(n, self.policy, self.adversary);
        if let Some(mode) = self.mode {
            spec.mode = mode;
        }
        if let Some(k) = self.k {
            spec.k = k;
        }
        if let Some(config) = &self.config {
            spec.config = config.clone();
        }
        if let Some(labels) = &self.labels {
            spec.labels = Some(
                spec::parse_list(labels)
                    .map_err(|_| CliError::Spec(format!("bad label list `{labels}`")))?,
            );
        }
        spec.orientations.clone_from(&self.orientations);
        spec.seed = self.seed;
        spec.max_rounds = self.max_rounds.unwrap_or(default_max_rounds(n));
        spec.trials = self.trials;
        spec.out.clone_from(&self.out);
        Ok(spec)
    }

    fn sizes(&self) -> Result<Vec<usize>, CliError> {
        match (&self.n, &self.config) {
            (Some(n), _) => parse_sizes(n),
            (None, Some(InitialConfig::Explicit(m))) => Ok(vec![m.len()]),
            (None, _) if self.spec.is_some() => Ok(Vec::new()),
            (None, _) => Err(CliError::Spec(
                "--n is required unless --config lists the nodes".into(),
            )),
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_run(args: &ExperimentArgs) -> Result<u8, CliError> {
    let sizes = args.sizes()?;
    let spec = match sizes.as_slice() {
        [] if args.spec.is_some() => args.to_spec(0)?,
        [n] => args.to_spec(*n)?,
        _ => {
            return Err(CliError::Spec(
                "run takes a single ring size; use sweep for ranges".into(),
            ))
        }
    };
    let (result, records) = run_spec(&spec)?;
    let mut out = output(spec.out.as_deref())?;
    match args.format.unwrap_or(Format::Jsonl) {
        Format::Jsonl => write_records(&mut out, &records)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["round", "perm", "edge", "config", "holes", "multinodes"])?;
            for r in &records {
                if let TraceRecord::Round {
                    round,
                    perm,
                    edge,
                    config,
                    holes,
                    multinodes,
                    ..
                } = r
                {
                    let join = |v: &[usize]| {
                        v.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    w.write_record([
                        round.to_string(),
                        perm.as_deref().map(join).unwrap_or_default(),
                        edge.map(|e| e.to_string()).unwrap_or_default(),
                        join(config),
                        holes.to_string(),
                        multinodes.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    out.flush()?;
    match result.outcome {
        Outcome::Dispersed => {
            eprintln!("dispersed after {} rounds", result.rounds);
            Ok(EXIT_OK)
        }
        Outcome::RoundLimitReached => {
            eprintln!("not dispersed after {} rounds", result.rounds);
            Ok(EXIT_FAILED)
        }
    }
}

fn cmd_sweep(args: &ExperimentArgs) -> Result<u8, CliError> {
    let sizes = args.sizes()?;
    let template = args.to_spec(sizes.first().copied().unwrap_or(1))?;
    let sizes = if sizes.is_empty() && args.spec.is_some() {
        vec![template.n]
    } else {
        sizes
    };
    let rows = sweep(&template, &sizes)?;
    let mut out = output(template.out.as_deref())?;
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut out);
            w.write_record([
                "n",
                "policy",
                "adversary",
                "seed",
                "rounds",
                "bound",
                "pass",
            ])?;
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for row in &rows {
                serde_json::to_writer(&mut out, row)?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    eprintln!("{} rows, {failed} failed", rows.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let mut out = output(args.out.as_deref())?;
    let pass = if args.impossibility {
        let report = verify_impossibility(args.adversary, args.n, args.horizon)?;
        serde_json::to_writer_pretty(&mut out, &report)?;
        eprintln!(
            "{} on n={}: {} rules x {} starts, {} escapes",
            report.killer,
            report.n,
            report.policies,
            report.starts,
            report.escapes.len()
        );
        report.pass
    } else {
        let bound = args
            .bound
            .or(proven_bound(args.policy, args.n))
            .ok_or_else(|| {
                CliError::Spec(format!(
                    "{} has no known bound; pass --bound",
                    args.policy.id()
                ))
            })?;
        let mode = args.mode.unwrap_or(default_mode(args.policy));
        let (report, _) =
            verify_worst_case(args.policy, mode, args.n, bound, SearchOptions::default())?;
        serde_json::to_writer_pretty(&mut out, &report)?;
        match report.worst_case {
            Some(w) => eprintln!(
                "{} on n={}: worst case {w} rounds, bound {bound}",
                report.policy.id(),
                report.n
            ),
            None => eprintln!(
                "{} on n={}: some run never disperses",
                report.policy.id(),
                report.n
            ),
        }
        report.pass
    };
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_replay(path: &Path) -> Result<u8, CliError> {
    let records = read_records(BufReader::new(File::open(path)?))?;
    let r = replay(&records)?;
    match r.mismatch {
        None => {
            eprintln!("replayed {} rounds, trace matches", r.rounds);
            Ok(EXIT_OK)
        }
        Some(m) => {
            eprintln!("trace diverges:\n{m}");
            Ok(EXIT_FAILED)
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Replay { trace } => cmd_replay(trace),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("5").unwrap(), [5]);
        assert_eq!(parse_sizes("3-9/2").unwrap(), [3, 5, 7, 9]);
        assert_eq!(parse_sizes("2,4-5").unwrap(), [2, 4, 5]);
        assert!(parse_sizes("").unwrap().is_empty());
        assert!(parse_sizes("3-x").is_err());
    }

    #[test]
    fn sweep_rows_follow_input_order() {
        let mut spec = ExperimentSpec::new(4, PolicyKind::VpOneInterval, AdversaryKind::Random);
        spec.trials = 5;
        spec.seed = 100;
        let rows = sweep(&spec, &[6, 4]).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.seed)).collect();
        assert_eq!(keys[..2], [(6, 100), (6, 101)]);
        assert_eq!(keys[5], (4, 100));
        assert!(rows.iter().all(|r| r.pass && r.bound == Some(r.n - 1)));
    }

    #[test]
    fn empty_sweep() {
        let spec = ExperimentSpec::new(4, PolicyKind::VpChain, AdversaryKind::Random);
        assert!(sweep(&spec, &[]).unwrap().is_empty());
    }
}
