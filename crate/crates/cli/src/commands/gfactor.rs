use clap::Args;
use serde::Serialize;
use spacelike_core::spatial::{g_decay_scan, g_factor_monte_carlo};
use spacelike_core::spinbell::UnitVector3;
use spacelike_core::{GaussianPacket3, Region, TwoParticleDensity};

use super::{echo, grid};
use crate::config::Settings;
use crate::output::{Body, Report};
use crate::packets::parse_vec3;

/// Standard errors allowed between sampled and closed-form g.
pub const DEFAULT_TOL: f64 = 4.0;

#[derive(Debug, Clone, Args, Serialize)]
pub struct GFactorArgs {
    #[arg(long, default_value = "0,0,0")]
    pub mean1: String,
    #[arg(long, default_value_t = 1.0)]
    pub sd1: f64,
    #[arg(long, default_value = "0,0,0")]
    pub mean2: String,
    #[arg(long, default_value_t = 1.0)]
    pub sd2: f64,
    #[arg(long, default_value = "0,0,0")]
    pub a_centre: String,
    #[arg(long, default_value_t = 1.0)]
    pub a_side: f64,
    #[arg(long, default_value = "0,0,0")]
    pub b_centre: String,
    #[arg(long, default_value_t = 1.0)]
    pub b_side: f64,
    /// Direction in which region A is moved
    #[arg(long, default_value = "1,0,0")]
    pub direction: String,
    #[arg(long, default_value_t = 0.0)]
    pub l_min: f64,
    #[arg(long, default_value_t = 12.0)]
    pub l_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub l_step: f64,
    /// Monte Carlo samples per row (0 skips sampling)
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Serialize)]
struct Row {
    l: f64,
    g: f64,
    regime: &'static str,
    mc: Option<f64>,
    mc_stderr: Option<f64>,
    pass: bool,
}

/// Sampling agreement with a binomial error floor, so rows where g is far
/// below 1/n are judged by the expected count rather than a zero sample
/// variance.
pub fn sample_agrees(exact: f64, sampled: f64, n: u64, k: f64) -> bool {
    let n = n as f64;
    let sd = (exact * (1.0 - exact) / n).sqrt().max(1.0 / n);
    (sampled - exact).abs() <= k * sd
}

/// g(O_A + l·e, O_B) for product Gaussian packets and cubic regions.
pub fn run(args: &GFactorArgs, settings: &Settings) -> anyhow::Result<Report> {
    let tol = settings.tol.unwrap_or(DEFAULT_TOL);
    let rho = TwoParticleDensity::Product(
        GaussianPacket3::new(parse_vec3(&args.mean1)?, args.sd1)?,
        GaussianPacket3::new(parse_vec3(&args.mean2)?, args.sd2)?,
    );
    let a = Region::cube(parse_vec3(&args.a_centre)?, args.a_side)?;
    let b = Region::cube(parse_vec3(&args.b_centre)?, args.b_side)?;
    let dir = UnitVector3::normalized(parse_vec3(&args.direction)?)?;
    let distances = grid(args.l_min, args.l_max, args.l_step)?;
    let gs = g_decay_scan(&rho, &a, &b, dir, &distances)?;
    let mut rows = Vec::new();
    for (i, (&l, g)) in distances.iter().zip(&gs).enumerate() {
        let (mc, mc_stderr, pass) = if args.samples > 0 {
            let shifted = a.translate(dir.components().map(|c| c * l));
            let est = g_factor_monte_carlo(&rho, &shifted, &b, args.samples, settings.seed.wrapping_add(i as u64))?;
            let ok = sample_agrees(g.value(), est.estimate, args.samples, tol);
            (Some(est.estimate), Some(est.stderr), ok)
        } else {
            (None, None, true)
        };
        rows.push(Row {
            l,
            g: g.value(),
            regime: g.regime().as_str(),
            mc,
            mc_stderr,
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Report {
        command: "gfactor",
        config: echo(settings, Some(tol), args),
        body: Body::Table(rows.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect()),
        pass,
        timing: None,
        runtime_ok: true,
    })
}
