//! Global flags, the JSON config file that mirrors them, and their resolution.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "SPACELIKE_JOBS";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Master seed for every Monte Carlo stream
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (scans default to csv, single records to json)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Pass/fail tolerance; its meaning and default depend on the subcommand
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads [default: $SPACELIKE_JOBS, else all cores]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// JSON file with any of seed, out, format, tol, jobs; flags win over it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    tol: Option<f64>,
    jobs: Option<usize>,
}

fn read_config(path: &Path) -> Result<ConfigFile, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("bad config {}: {e}", path.display())))
}

/// Effective settings: flag, then config file, then environment, then default.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub jobs: usize,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, UsageError> {
        let file = match &args.config {
            Some(p) => read_config(p)?,
            None => ConfigFile::default(),
        };
        let env_jobs = match std::env::var(JOBS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| UsageError(format!("{JOBS_ENV}={v:?} is not a thread count")))?,
            ),
            Err(_) => None,
        };
        let jobs = args
            .jobs
            .or(file.jobs)
            .or(env_jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            return Err(UsageError("jobs must be at least 1".into()));
        }
        let tol = args.tol.or(file.tol);
        if let Some(t) = tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(UsageError(format!("tol must be a positive number, got {t}")));
            }
        }
        Ok(Self {
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format),
            tol,
            jobs,
        })
    }
}
