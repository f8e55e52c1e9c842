use std::f64::consts::SQRT_2;

use clap::Args;
use serde::Serialize;
use spacelike_core::spinbell::{chsh_max_quantum, CHSH_CLASSICAL_BOUND};
use spacelike_core::GFactor;

use super::{echo, grid};
use crate::config::Settings;
use crate::output::{Body, Report};

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChshArgs {
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub g_step: f64,
}

#[derive(Serialize)]
struct Row {
    g: f64,
    s_max: f64,
    expected: f64,
    deviation: f64,
    exceeds_classical: bool,
    regime: &'static str,
    alpha: f64,
    alpha_prime: f64,
    beta: f64,
    beta_prime: f64,
    pass: bool,
}

/// Maximal CHSH value of g cos(α − β) against 2√2 g.
pub fn run(args: &ChshArgs, settings: &Settings) -> anyhow::Result<Report> {
    let tol = settings.tol.unwrap_or(DEFAULT_TOL);
    let mut rows = Vec::new();
    for g in grid(args.g_min, args.g_max, args.g_step)? {
        // the last grid point may overshoot 1 by round-off
        let g = if g > 1.0 && g - 1.0 < 1e-9 { 1.0 } else { g };
        let gf = GFactor::new(g)?;
        let opt = chsh_max_quantum(gf);
        let expected = 2.0 * SQRT_2 * g;
        let [alpha, alpha_prime, beta, beta_prime] = opt.angles;
        rows.push(Row {
            g,
            s_max: opt.value,
            expected,
            deviation: (opt.value - expected).abs(),
            exceeds_classical: opt.value > CHSH_CLASSICAL_BOUND,
            regime: gf.regime().as_str(),
            alpha,
            alpha_prime,
            beta,
            beta_prime,
            pass: (opt.value - expected).abs() <= tol,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Report {
        command: "chsh",
        config: echo(settings, Some(tol), args),
        body: Body::Table(rows.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect()),
        pass,
        timing: None,
        runtime_ok: true,
    })
}
