//! Batch front end.
//!
//! A run reads a JSON [`ExperimentConfig`], applies command-line overrides,
//! and writes a JSON [`Report`] (or a CSV profile) to the output path or to
//! standard output. Exit codes: 0 on a completed run, 2 for an invalid
//! config or invocation, 3 for a runtime failure.

mod config;
mod report;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

pub use config::{
    Command, ExperimentConfig, Format, Output, Overrides, QueryParams, SetRef, CONFIG_SCHEMA,
};
pub use report::{CatalogResult, LawCaseResult, PointResult, ProfileRow, Report, Results, REPORT_SCHEMA};
pub use run::execute;

use crate::scalar::QSqrt2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("runtime failure: {0}")]
    Runtime(#[from] crate::Error),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbitwise", version, about = "Finite-scale orbitwise expansivity experiments")]
pub struct Args {
    /// Experiment config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Largest scale, as a rational or `a + b*sqrt2`.
    #[arg(long)]
    pub eps_max: Option<String>,
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Loads the config named by `args`, applies the overrides and fixes the
/// output format.
pub fn load(args: &Args) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text).map_err(CliError::Config)?;
    let eps_max = match &args.eps_max {
        Some(s) => Some(s.parse::<QSqrt2>().map_err(|e| CliError::Config(format!("--eps-max: {e}")))?),
        None => None,
    };
    cfg.apply(&Overrides {
        seed: args.seed,
        horizon: args.horizon,
        eps_max,
        levels: args.levels,
        samples: args.samples,
        out: args.out.clone(),
        format: args.format,
    });
    cfg.resolve_format().map_err(CliError::Config)?;
    Ok(cfg)
}

fn write(report: &Report, cfg: &ExperimentConfig) -> Result<(), CliError> {
    let body = match cfg.output.format {
        Some(Format::Csv) => report.to_csv().expect("csv is only accepted for profiles"),
        _ => report.to_json(),
    };
    match &cfg.output.path {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_args(args: &Args) -> Result<(), CliError> {
    let cfg = load(args)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = args.workers {
        pool = pool.num_threads(w.max(1));
    }
    let pool = pool.build().map_err(|e| CliError::Io(e.to_string()))?;
    let start = Instant::now();
    let report = pool.install(|| execute(&cfg))?;
    write(&report, &cfg)?;
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    Ok(())
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_args(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("orbitwise: {e}");
            e.exit_code()
        }
    }
}
