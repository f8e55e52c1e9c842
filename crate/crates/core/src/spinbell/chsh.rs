use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use super::GFactor;
use crate::error::{domain, Result};

/// Upper bound of |P₁₁ - P₁₂| + |P₂₁ + P₂₂| for bounded classical variables.
pub const CHSH_CLASSICAL_BOUND: f64 = 2.0;
/// Slack above the bound before a verdict flips to fail.
pub const CHSH_SLACK: f64 = 1e-9;

const GRID: usize = 64;
const REFINE_TOL: f64 = 1e-12;

/// P_ij = E f_i g_j for two settings per side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationMatrix([[f64; 2]; 2]);

impl CorrelationMatrix {
    pub fn new(p: [[f64; 2]; 2]) -> Result<Self> {
        if p.iter().flatten().any(|v| !(v.abs() <= 1.0)) {
            return domain(format!("correlations must lie in [-1, 1], got {p:?}"));
        }
        Ok(Self(p))
    }

    /// P_ij = g cos(αᵢ - βⱼ).
    pub fn damped_cosine(g: GFactor, alphas: [f64; 2], betas: [f64; 2]) -> Self {
        let g = g.value();
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| g * (alphas[i] - betas[j]).cos())
        }))
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.0
    }
}

/// S = |P₁₁ - P₁₂| + |P₂₁ + P₂₂|.
pub fn chsh(p: &CorrelationMatrix) -> f64 {
    let [[p11, p12], [p21, p22]] = p.0;
    (p11 - p12).abs() + (p21 + p22).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Necessary condition for a classical representation: fails iff S > 2 + slack.
/// A pass certifies nothing.
pub fn local_realism_necessary_test(p: &CorrelationMatrix) -> Verdict {
    if chsh(p) > CHSH_CLASSICAL_BOUND + CHSH_SLACK {
        Verdict::Fail
    } else {
        Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshOptimum {
    pub value: f64,
    /// α, α', β, β'.
    pub angles: [f64; 4],
}

fn chsh_at(g: f64, t: [f64; 4]) -> f64 {
    let [a, a2, b, b2] = t;
    g * (((a - b).cos() - (a - b2).cos()).abs() + ((a2 - b).cos() + (a2 - b2).cos()).abs())
}

/// Maximum of S over coplanar angle quadruples for P_ij = g cos(αᵢ - βⱼ).
///
/// Exhaustive 64⁴ grid on [0, 2π)⁴, then coordinate-wise golden-section
/// refinement.
pub fn chsh_max_quantum(g: GFactor) -> ChshOptimum {
    let gv = g.value();
    let step = TAU / GRID as f64;
    let cos_diff: Vec<f64> = (0..GRID).map(|d| (d as f64 * step).cos()).collect();
    let c = |i: usize, j: usize| cos_diff[(i + GRID - j) % GRID];

    let (best, idx) = (0..GRID)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, [0usize; 4]);
            for i2 in 0..GRID {
                for j in 0..GRID {
                    for j2 in 0..GRID {
                        let s = (c(i, j) - c(i, j2)).abs() + (c(i2, j) + c(i2, j2)).abs();
                        if s > best.0 {
                            best = (s, [i, i2, j, j2]);
                        }
                    }
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, [0usize; 4]),
            |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x },
        );

    let mut angles = idx.map(|k| k as f64 * step);
    let mut value = gv * best;
    if gv > 0.0 {
        let mut width = step;
        for _ in 0..200 {
            let before = value;
            for coord in 0..4 {
                let centre = angles[coord];
                let f = |x: f64| {
                    let mut t = angles;
                    t[coord] = x;
                    chsh_at(gv, t)
                };
                let x = golden_max(f, centre - width, centre + width);
                let v = f(x);
                if v > value {
                    value = v;
                    angles[coord] = x;
                }
            }
            if value - before <= REFINE_TOL * value.max(1e-300) {
                width *= 0.5;
                if width < 1e-9 {
                    break;
                }
            }
        }
    }
    ChshOptimum {
        value,
        angles: angles.map(|a| a.rem_euclid(TAU)),
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// The g at which the maximal S crosses 2, by bisection on `chsh_max_quantum`.
pub fn g_at_chsh_bound(tol: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    let s = |g: f64| chsh_max_quantum(GFactor::new(g).expect("bisection stays in [0,1]")).value;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if s(mid) > CHSH_CLASSICAL_BOUND {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
