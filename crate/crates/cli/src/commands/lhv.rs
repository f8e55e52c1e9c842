use clap::Args;
use serde::Serialize;
use spacelike_core::spinbell::{lhv_correlation_exact, lhv_monte_carlo, LhvRegime};
use spacelike_core::GFactor;

use super::echo;
use crate::config::Settings;
use crate::output::{Body, Report};
use crate::UsageError;

/// Standard errors allowed between the sample mean and g cos(α − β).
pub const DEFAULT_TOL: f64 = 4.0;
const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Args, Serialize)]
pub struct LhvArgs {
    #[arg(long, default_value_t = 0.5)]
    pub g: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Serialize)]
struct Record {
    regime: &'static str,
    target: f64,
    quadrature: f64,
    quadrature_error: f64,
    estimate: f64,
    stderr: f64,
    deviation_sigma: f64,
    max_abs_xi: f64,
    max_abs_eta: f64,
    samples: u64,
}

/// The bounded hidden-variable model √(2g) cos(θ − λ): exact average over λ
/// and a Monte Carlo run. Tolerance in standard errors.
pub fn run(args: &LhvArgs, settings: &Settings) -> anyhow::Result<Report> {
    let tol = settings.tol.unwrap_or(DEFAULT_TOL);
    let g = GFactor::new(args.g)?;
    if g.regime() != LhvRegime::Exists {
        return Err(UsageError(format!(
            "the model needs g <= 1/2; g = {} is {}",
            args.g,
            g.regime().as_str()
        ))
        .into());
    }
    let target = args.g * (args.alpha - args.beta).cos();
    let exact = lhv_correlation_exact(g, args.alpha, args.beta);
    let mc = lhv_monte_carlo(g, args.alpha, args.beta, args.samples, settings.seed)?;
    let dev = (mc.estimate.estimate - target).abs();
    let deviation_sigma = if mc.estimate.stderr > 0.0 { dev / mc.estimate.stderr } else if dev == 0.0 { 0.0 } else { f64::INFINITY };
    let record = Record {
        regime: g.regime().as_str(),
        target,
        quadrature: exact.value,
        quadrature_error: (exact.value - target).abs(),
        estimate: mc.estimate.estimate,
        stderr: mc.estimate.stderr,
        deviation_sigma,
        max_abs_xi: mc.max_abs_xi,
        max_abs_eta: mc.max_abs_eta,
        samples: mc.estimate.samples,
    };
    let pass = record.quadrature_error <= QUADRATURE_TOL
        && deviation_sigma <= tol
        && record.max_abs_xi <= 1.0
        && record.max_abs_eta <= 1.0;
    Ok(Report {
        command: "lhv",
        config: echo(settings, Some(tol), args),
        body: Body::Record(serde_json::to_value(record)?),
        pass,
        timing: None,
        runtime_ok: true,
    })
}
