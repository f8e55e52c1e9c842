use clap::Args;
use serde::Serialize;
use serde_json::Value;
use spacelike_core::fieldkernel::{
    wightman_asymptotic, wightman_closed, wightman_quadrature, QuadratureOptions,
};
use spacelike_core::{Mass, SpacelikeInterval};

use super::{echo, grid};
use crate::config::Settings;
use crate::output::{Body, Report};

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Args, Serialize)]
pub struct WightmanArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r_step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

#[derive(Serialize)]
struct Row {
    r: f64,
    closed: f64,
    quadrature: Option<f64>,
    rel_err: Option<f64>,
    asymptotic: Option<f64>,
    ratio: Option<f64>,
    pass: bool,
    note: Option<String>,
}

/// Closed form, direct quadrature and the large-distance form side by side.
/// The tolerance is the relative quadrature error.
pub fn run(args: &WightmanArgs, settings: &Settings) -> anyhow::Result<Report> {
    let tol = settings.tol.unwrap_or(DEFAULT_TOL);
    let mass = Mass::new(args.mass)?;
    let opts = QuadratureOptions {
        tol: tol.min(DEFAULT_TOL),
        ..QuadratureOptions::default()
    };
    let mut rows = Vec::new();
    for r in grid(args.r_min, args.r_max, args.r_step)? {
        let iv = SpacelikeInterval::new(r)?;
        let closed = wightman_closed(iv, mass)?.value;
        let mut notes = Vec::new();
        let quadrature = match wightman_quadrature(iv, mass, opts) {
            Ok(v) => Some(v.value),
            Err(e) => {
                notes.push(format!("quadrature: {e}"));
                None
            }
        };
        let rel_err = quadrature.map(|q| ((q - closed) / closed).abs());
        let (asymptotic, ratio) = match wightman_asymptotic(iv, mass) {
            Ok(a) => (Some(a.asymptotic.value), Some(a.ratio)),
            Err(e) => {
                notes.push(format!("asymptotic: {e}"));
                (None, None)
            }
        };
        rows.push(Row {
            r,
            closed,
            quadrature,
            rel_err,
            asymptotic,
            ratio,
            pass: rel_err.is_some_and(|e| e <= tol),
            note: (!notes.is_empty()).then(|| notes.join("; ")),
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Report {
        command: "wightman",
        config: echo(settings, Some(tol), args),
        body: Body::Table(rows.iter().map(to_value).collect()),
        pass,
        timing: None,
        runtime_ok: true,
    })
}

fn to_value(r: &Row) -> Value {
    serde_json::to_value(r).expect("row serializes")
}
