use clap::Args;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use spacelike_core::randomfield::{
    cutoff_kernel, ensemble_moments, ComplexEstimate, LatticeKernel, MomentQuery, Site,
    MAX_MOMENT_ORDER,
};
use spacelike_core::rng::stream_rng;
use spacelike_core::{Complex64, LatticeSpec, Mass};

use super::echo;
use crate::config::Settings;
use crate::output::{Body, Report};
use crate::UsageError;

/// Standard errors allowed between ensemble moments and the permanent.
pub const DEFAULT_TOL: f64 = 4.0;

#[derive(Debug, Clone, Args, Serialize)]
pub struct RandomFieldArgs {
    /// Sites per axis (power of two)
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub spacing: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 10_000)]
    pub ensemble: usize,
    /// Random point configurations per moment order
    #[arg(long, default_value_t = 5)]
    pub configs: usize,
    /// Highest order n of E ξ(x₁)…ξ(xₙ)ξ*(y₁)…ξ*(yₙ)
    #[arg(long, default_value_t = 2)]
    pub max_order: usize,
}

#[derive(Serialize)]
struct MomentRow {
    order: usize,
    xs: Vec<Site>,
    ys: Vec<Site>,
    conjugated: bool,
    oracle_re: f64,
    oracle_im: f64,
    mean_re: f64,
    mean_im: f64,
    stderr_re: f64,
    stderr_im: f64,
    pass: bool,
}

/// Sites offset by at most `spread` per axis from a random base site, so
/// the kernel entries stay well above the sampling noise.
pub fn random_sites(seed: u64, stream: u64, count: usize, n: usize, spread: i64) -> Vec<Site> {
    let mut rng = stream_rng(seed, stream);
    let base: Site = std::array::from_fn(|_| rng.random_range(0..n as i64));
    (0..count)
        .map(|_| std::array::from_fn(|i| base[i] + rng.random_range(0..=spread)))
        .collect()
}

/// Largest per-axis offset inside one moment configuration.
const SPREAD: i64 = 1;

pub struct MomentCheck {
    pub rows: Vec<Value>,
    pub pass: bool,
    pub kernel_lag0: f64,
    pub continuum_lag0: f64,
}

/// Ensemble moments of orders 1..=max_order (plus unconjugated E ξξ) against
/// permanents of the exact lattice kernel.
pub fn check_moments(
    spec: LatticeSpec,
    ensemble: usize,
    configs: usize,
    max_order: usize,
    seed: u64,
    k: f64,
) -> anyhow::Result<MomentCheck> {
    let kernel = LatticeKernel::new(spec);
        let mut queries = Vec::new();
    let mut oracles = Vec::new();
    for order in 1..=max_order {
        for c in 0..configs {
            let pts = random_sites(seed, (order * 1000 + c) as u64, 2 * order, spec.n(), SPREAD);
            let (xs, ys) = pts.split_at(order);
            oracles.push(kernel.moment(xs, ys)?);
            queries.push(MomentQuery::new(xs.to_vec(), ys.to_vec()));
        }
    }
    for c in 0..configs {
        let pts = random_sites(seed, (9000 + c) as u64, 2, spec.n(), SPREAD);
        oracles.push(Complex64::new(0.0, 0.0));
        queries.push(MomentQuery::unconjugated(vec![pts[0]], vec![pts[1]]));
    }
    let est: Vec<ComplexEstimate> = ensemble_moments(spec, seed, ensemble, &queries)?;
    let rows: Vec<MomentRow> = queries
        .iter()
        .zip(&oracles)
        .zip(&est)
        .map(|((q, o), e)| MomentRow {
            order: q.xs.len(),
            xs: q.xs.clone(),
            ys: q.ys.clone(),
            conjugated: q.conjugate_ys,
            // + 0.0 turns a signed zero into 0.0
            oracle_re: o.re + 0.0,
            oracle_im: o.im + 0.0,
            mean_re: e.mean.re,
            mean_im: e.mean.im,
            stderr_re: e.stderr_re,
            stderr_im: e.stderr_im,
            pass: e.consistent_with(*o, k),
        })
        .collect();
    Ok(MomentCheck {
        pass: rows.iter().all(|r| r.pass),
        rows: rows.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect(),
        kernel_lag0: kernel.covariance([0; 3], [0; 3]),
        continuum_lag0: cutoff_kernel(spec.mass(), spec.cutoff(), 0.0),
    })
}

pub fn run(args: &RandomFieldArgs, settings: &Settings) -> anyhow::Result<Report> {
    let tol = settings.tol.unwrap_or(DEFAULT_TOL);
    if args.max_order == 0 || args.max_order > MAX_MOMENT_ORDER {
        return Err(UsageError(format!("max-order must be in 1..={MAX_MOMENT_ORDER}")).into());
    }
    let spec = LatticeSpec::new(args.n, args.spacing, Mass::new(args.mass)?)?;
    let check = check_moments(spec, args.ensemble, args.configs, args.max_order, settings.seed, tol)?;
    Ok(Report {
        command: "randomfield",
        config: echo(settings, Some(tol), args),
        body: Body::Record(json!({
            "cutoff": spec.cutoff(),
            "kernel_lag0": check.kernel_lag0,
            "continuum_kernel_lag0": check.continuum_lag0,
            "moments": check.rows,
        })),
        pass: check.pass,
        timing: None,
        runtime_ok: true,
    })
}
