use clap::Args;
use serde::Serialize;
use spacelike_core::wick::WickEngine;
use spacelike_core::Mass;

use super::{echo, grid};
use crate::config::Settings;
use crate::output::{Body, Report};
use crate::packets::{parse_packet, parse_vec3, PacketPool};

pub const DEFAULT_TOL: f64 = 1e-4;
/// Values below this are treated as round-off when checking monotonicity.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClusterArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Momentum width of the built-in packets u, v, w
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Extra packet NAME=x,y,z/kx,ky,kz/sigma (repeatable)
    #[arg(long = "packet")]
    pub packets: Vec<String>,
    /// Creator monomial C of the state C|0>, e.g. "w" ("1" for the vacuum)
    #[arg(long, default_value = "w")]
    pub state: String,
    /// Translated observable A
    #[arg(long, default_value = "u*u")]
    pub a: String,
    /// Fixed observable B
    #[arg(long, default_value = "u*u")]
    pub b: String,
    #[arg(long, default_value_t = 0.0)]
    pub l_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub l_max: f64,
    #[arg(long, default_value_t = 2.0)]
    pub l_step: f64,
    #[arg(long, default_value = "1,0,0")]
    pub direction: String,
    /// Cap on the total number of field factors
    #[arg(long, default_value_t = spacelike_core::wick::DEFAULT_MAX_FACTORS)]
    pub max_factors: usize,
}

#[derive(Serialize)]
struct Row {
    l: f64,
    gap: f64,
    omega_re: f64,
    omega_im: f64,
    vacuum_re: f64,
    vacuum_im: f64,
}

/// True when the second half of `values` decreases strictly until it reaches
/// round-off.
pub fn tail_decreasing(values: &[f64]) -> bool {
    values[values.len() / 2..]
        .windows(2)
        .all(|w| w[1] < w[0] || w[0] < ROUNDOFF_FLOOR)
}

/// Connected correlation ω(A(l)B) − ω(A(l))ω(B) along a translation ray.
/// Passes when the tail decreases and the last gap is below the tolerance.
pub fn run(args: &ClusterArgs, settings: &Settings) -> anyhow::Result<Report> {
    let tol = settings.tol.unwrap_or(DEFAULT_TOL);
    let mut pool = PacketPool::standard(args.sigma)?;
    for p in &args.packets {
        let (name, amp) = parse_packet(p)?;
        pool.insert(name, amp);
    }
    let engine = WickEngine::new(Mass::new(args.mass)?).with_max_factors(args.max_factors);
    let state = engine.state(pool.monomial(&args.state)?)?;
    let a = pool.monomial(&args.a)?;
    let b = pool.monomial(&args.b)?;
    let distances = grid(args.l_min, args.l_max, args.l_step)?;
    let scan = engine.cluster_scan(&state, &a, &b, parse_vec3(&args.direction)?, &distances)?;
    let gaps: Vec<f64> = scan.iter().map(|r| r.gap).collect();
    let pass = tail_decreasing(&gaps) && gaps.last().is_some_and(|&g| g <= tol);
    let rows = scan
        .iter()
        .map(|r| {
            serde_json::to_value(Row {
                l: r.distance,
                gap: r.gap,
                omega_re: r.state_value.re,
                omega_im: r.state_value.im,
                vacuum_re: r.vacuum_value.re,
                vacuum_im: r.vacuum_value.im,
            })
            .expect("row serializes")
        })
        .collect();
    Ok(Report {
        command: "cluster",
        config: echo(settings, Some(tol), args),
        body: Body::Table(rows),
        pass,
        timing: None,
        runtime_ok: true,
    })
}
