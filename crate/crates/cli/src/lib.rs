//! Command-line driver: argument model, settings resolution, report
//! rendering and the acceptance checks behind `verify-all`.

pub mod commands;
pub mod config;
pub mod output;
pub mod packets;
pub mod verify;

use std::fmt;
use std::io::Write;

use clap::{Parser, Subcommand};

use commands::{chsh, cluster, gfactor, lhv, randomfield, theorem8, verify_all, wightman};
use config::{GlobalArgs, Settings};
use output::Report;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Invalid invocation: bad flag values, unreadable config, impossible setup.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "spacelike", version, about = "Checks of vacuum correlations at spacelike separation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-point function: closed form, quadrature and asymptotic over r
    Wightman(wightman::WightmanArgs),
    /// Connected correlations of field monomials under translation
    Cluster(cluster::ClusterArgs),
    /// Maximal CHSH value of damped singlet correlations over g
    Chsh(chsh::ChshArgs),
    /// Bounded hidden-variable model for g <= 1/2
    Lhv(lhv::LhvArgs),
    /// Spatial overlap factor g as region A moves away
    Gfactor(gfactor::GFactorArgs),
    /// Factorized classical model outside a ball
    Theorem8(theorem8::Theorem8Args),
    /// Lattice random field moments against kernel permanents
    Randomfield(randomfield::RandomFieldArgs),
    /// Every acceptance check, with a time budget
    VerifyAll(verify_all::VerifyAllArgs),
}

/// Maps an error to its exit code: invalid input is a usage error, numerical
/// breakdown counts as a failed check.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() || err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<spacelike_core::Error>() {
        Some(spacelike_core::Error::Convergence(_) | spacelike_core::Error::BoundViolation { .. }) => EXIT_TOLERANCE,
        Some(_) => EXIT_USAGE,
        None => EXIT_TOLERANCE,
    }
}

pub fn execute(command: &Command, settings: &Settings) -> anyhow::Result<Report> {
    match command {
        Command::Wightman(a) => wightman::run(a, settings),
        Command::Cluster(a) => cluster::run(a, settings),
        Command::Chsh(a) => chsh::run(a, settings),
        Command::Lhv(a) => lhv::run(a, settings),
        Command::Gfactor(a) => gfactor::run(a, settings),
        Command::Theorem8(a) => theorem8::run(a, settings),
        Command::Randomfield(a) => randomfield::run(a, settings),
        Command::VerifyAll(a) => verify_all::run(a, settings),
    }
}

/// Runs one invocation and returns the exit code.
pub fn run(cli: Cli) -> anyhow::Result<u8> {
    let settings = Settings::resolve(&cli.global)?;
    // a second initialization (tests in one process) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(settings.jobs).build_global();
    let report = execute(&cli.command, &settings)?;
    let text = report.render(settings.format.unwrap_or_else(|| report.default_format()));
    match &settings.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if !report.pass {
        eprintln!("{}: tolerance check failed", report.command);
    } else if !report.runtime_ok {
        eprintln!("{}: runtime limit exceeded", report.command);
    }
    Ok(if report.pass && report.runtime_ok { EXIT_PASS } else { EXIT_TOLERANCE })
}
