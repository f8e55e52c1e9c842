//! The explicit model ξ_α(λ) = √(2g) cos(α - λ), η_β(λ) = √(2g) cos(β - λ)
//! with λ uniform on the circle, reproducing g cos(α - β).

use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use super::chsh::{chsh, CorrelationMatrix};
use super::GFactor;
use crate::error::{Error, Result};
use crate::rng::{map_chunks, McEstimate, RunningStats};

pub const MIN_LHV_SAMPLES: u64 = 1_000;

/// Trapezoid nodes on the circle; exact for trigonometric polynomials of
/// degree below this.
const CIRCLE_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhvExact {
    pub value: f64,
    /// False when √(2g) > 1, i.e. the variables leave [-1, 1].
    pub bounded: bool,
}

fn amplitude(g: GFactor) -> f64 {
    (2.0 * g.value()).sqrt()
}

/// ∫₀^{2π} ξ_α(λ) η_β(λ) dλ/2π by the periodic trapezoidal rule.
pub fn lhv_correlation_exact(g: GFactor, alpha: f64, beta: f64) -> LhvExact {
    let c = amplitude(g);
    let h = TAU / CIRCLE_NODES as f64;
    let sum: f64 = (0..CIRCLE_NODES)
        .map(|k| {
            let lambda = k as f64 * h;
            c * (alpha - lambda).cos() * c * (beta - lambda).cos()
        })
        .sum();
    LhvExact {
        value: sum / CIRCLE_NODES as f64,
        bounded: c <= 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhvSample {
    pub estimate: McEstimate,
    pub max_abs_xi: f64,
    pub max_abs_eta: f64,
}

fn check_model(g: GFactor, n: u64) -> Result<f64> {
    if n < MIN_LHV_SAMPLES {
        return Err(Error::Precondition(format!(
            "need at least {MIN_LHV_SAMPLES} samples, got {n}"
        )));
    }
    let c = amplitude(g);
    if c > 1.0 {
        return Err(Error::BoundViolation {
            variable: "sqrt(2g)",
            value: c,
        });
    }
    Ok(c)
}

fn bounded(variable: &'static str, value: f64) -> Result<f64> {
    if value.abs() > 1.0 {
        Err(Error::BoundViolation { variable, value })
    } else {
        Ok(value)
    }
}

/// Monte Carlo estimate of E ξ_α η_β. Every sampled value is checked
/// against |·| <= 1 and a violation aborts the run.
pub fn lhv_monte_carlo(g: GFactor, alpha: f64, beta: f64, n: u64, seed: u64) -> Result<LhvSample> {
    let c = check_model(g, n)?;
    let parts = map_chunks(seed, n, |rng, count| -> Result<(RunningStats, f64, f64)> {
        let mut stats = RunningStats::default();
        let (mut mx, mut my) = (0.0f64, 0.0f64);
        for _ in 0..count {
            let lambda = rng.random::<f64>() * TAU;
            let xi = bounded("xi", c * (alpha - lambda).cos())?;
            let eta = bounded("eta", c * (beta - lambda).cos())?;
            mx = mx.max(xi.abs());
            my = my.max(eta.abs());
            stats.push(xi * eta);
        }
        Ok((stats, mx, my))
    });
    let mut total = RunningStats::default();
    let (mut max_abs_xi, mut max_abs_eta) = (0.0f64, 0.0f64);
    for part in parts {
        let (s, mx, my) = part?;
        total.merge(&s);
        max_abs_xi = max_abs_xi.max(mx);
        max_abs_eta = max_abs_eta.max(my);
    }
    Ok(LhvSample {
        estimate: total.into(),
        max_abs_xi,
        max_abs_eta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhvMatrixSample {
    pub matrix: CorrelationMatrix,
    pub stderr: [[f64; 2]; 2],
    pub chsh: f64,
    /// Sum of the four entry standard errors.
    pub chsh_stderr: f64,
}

/// All four correlations P_ij = E ξ_{αᵢ} η_{βⱼ} from one shared hidden-variable
/// sample, as a two-setting experiment would record them.
pub fn lhv_correlation_matrix(
    g: GFactor,
    alphas: [f64; 2],
    betas: [f64; 2],
    n: u64,
    seed: u64,
) -> Result<LhvMatrixSample> {
    let c = check_model(g, n)?;
    let parts = map_chunks(seed, n, |rng, count| -> Result<[[RunningStats; 2]; 2]> {
        let mut s = [[RunningStats::default(); 2]; 2];
        for _ in 0..count {
            let lambda = rng.random::<f64>() * TAU;
            let xi = [
                bounded("xi", c * (alphas[0] - lambda).cos())?,
                bounded("xi", c * (alphas[1] - lambda).cos())?,
            ];
            let eta = [
                bounded("eta", c * (betas[0] - lambda).cos())?,
                bounded("eta", c * (betas[1] - lambda).cos())?,
            ];
            for i in 0..2 {
                for j in 0..2 {
                    s[i][j].push(xi[i] * eta[j]);
                }
            }
        }
        Ok(s)
    });
    let mut total = [[RunningStats::default(); 2]; 2];
    for part in parts {
        let part = part?;
        for i in 0..2 {
            for j in 0..2 {
                total[i][j].merge(&part[i][j]);
            }
        }
    }
    let matrix = CorrelationMatrix::new(total.map(|row| row.map(|s| s.mean)))?;
    let stderr = total.map(|row| row.map(|s| s.stderr()));
    Ok(LhvMatrixSample {
        matrix,
        stderr,
        chsh: chsh(&matrix),
        chsh_stderr: stderr.iter().flatten().sum(),
    })
}
