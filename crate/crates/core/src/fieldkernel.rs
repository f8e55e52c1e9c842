//! Vacuum two-point function W₀ of the free scalar field at spacelike separation.
//!
//! With ℏ = c = 1 and r the invariant distance √(-x²),
//!
//! ```text
//! W₀(r; m) = (1/(2π)³) ∫ d³k/(2ω_k) e^{ik·x} = (1/(4π² r)) ∫₀^∞ k sin(kr)/ω_k dk
//! ```
//!
//! which evaluates to `m K₁(mr) / (4π² r)` for m > 0 and `1/(4π² r²)` for m = 0.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quad::{extrapolate_to_zero, GaussLegendre};
use crate::special::bessel_k1;

/// Intervals closer to the light cone than this are rejected.
pub const LIGHTCONE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Mass(f64);

impl Mass {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return domain(format!("mass must be finite and >= 0, got {m}"));
        }
        Ok(Self(m))
    }

    pub fn massless() -> Self {
        Self(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// ω(k) = √(k² + m²).
    pub fn energy(self, k: f64) -> f64 {
        (k * k + self.0 * self.0).sqrt()
    }
}

/// Invariant spatial distance of a spacelike separation, reduced to equal time.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SpacelikeInterval(f64);

impl SpacelikeInterval {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < LIGHTCONE_GUARD {
            return domain(format!(
                "spacelike distance must be finite and >= {LIGHTCONE_GUARD}, got {r}"
            ));
        }
        Ok(Self(r))
    }

    /// Maps a separation (Δt, |Δx|) to the equal-time chart, r = √(|Δx|² - Δt²).
    pub fn from_separation(dt: f64, distance: f64) -> Result<Self> {
        let s = distance * distance - dt * dt;
        if !(s > 0.0) {
            return domain(format!(
                "separation (dt={dt}, |dx|={distance}) is not spacelike"
            ));
        }
        Self::new(s.sqrt())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WightmanMethod {
    ClosedForm,
    Quadrature,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WightmanValue {
    pub value: f64,
    pub method: WightmanMethod,
}

pub fn wightman_closed(r: SpacelikeInterval, m: Mass) -> Result<WightmanValue> {
    let r = r.value();
    let m = m.value();
    let value = if m == 0.0 {
        1.0 / (4.0 * PI * PI * r * r)
    } else {
        m * bessel_k1(m * r)? / (4.0 * PI * PI * r)
    };
    Ok(WightmanValue {
        value,
        method: WightmanMethod::ClosedForm,
    })
}

/// Settings for [`wightman_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureOptions {
    /// Largest momentum the radial integral may reach.
    pub cutoff: f64,
    /// Relative tolerance on the extrapolated value.
    pub tol: f64,
    /// Number of damping levels ε_j = ε₀ / 2^j available to the extrapolation.
    pub max_levels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            cutoff: f64::INFINITY,
            tol: 1e-6,
            max_levels: 12,
        }
    }
}

/// Largest damping, in units of r.
const DAMPING_START: f64 = 0.2;
/// e^{-εk} is below 1e-17 past k = DAMPING_SPAN / ε.
const DAMPING_SPAN: f64 = 40.0;
const NODES_PER_HALF_PERIOD: usize = 20;

/// Direct evaluation of the radial momentum integral.
///
/// The conditionally convergent integrand is damped by e^{-εk}; the damped
/// integrals on a halving ladder of ε are extrapolated to ε → 0. For m > 0
/// the integrand is split as k/ω = 1 + (k/ω - 1): the damped sine integral is
/// r/(r² + ε²) exactly and only the 1/k²-decaying remainder is integrated
/// numerically, which keeps exponentially small results above round-off. Fails if the
/// extrapolation has not settled to `tol` before the ladder or the momentum
/// cutoff runs out.
pub fn wightman_quadrature(
    r: SpacelikeInterval,
    m: Mass,
    opts: QuadratureOptions,
) -> Result<WightmanValue> {
    if !(opts.cutoff > 0.0) || !(opts.tol > 0.0) {
        return domain("cutoff and tol must be positive");
    }
    let rv = r.value();
    let rule = GaussLegendre::new(NODES_PER_HALF_PERIOD);
    let mut steps = Vec::new();
    let mut values = Vec::new();
    let mut last = f64::NAN;
    let mut eps = DAMPING_START * rv;
    for _ in 0..opts.max_levels {
        let k_end = DAMPING_SPAN / eps;
        if k_end > opts.cutoff {
            break;
        }
        steps.push(eps);
        let value = if m.value() > 0.0 {
            rv / (rv * rv + eps * eps) + damped_radial_integral(rv, m, eps, k_end, &rule, true)
        } else {
            damped_radial_integral(rv, m, eps, k_end, &rule, false)
        };
        values.push(value);
        let diag = extrapolate_to_zero(&steps, &values);
        let current = diag[diag.len() - 1];
        if diag.len() >= 3 && (current - last).abs() <= opts.tol * current.abs() {
            return Ok(WightmanValue {
                value: current / (4.0 * PI * PI * rv),
                method: WightmanMethod::Quadrature,
            });
        }
        last = current;
        eps *= 0.5;
    }
    Err(Error::Convergence(format!(
        "damped radial integral at r={rv}, m={} did not settle to {} within {} levels (cutoff {})",
        m.value(),
        opts.tol,
        steps.len(),
        opts.cutoff
    )))
}

/// ∫₀^{k_end} h(k) sin(kr) e^{-εk} dk with h = k/ω, or h = k/ω - 1 when
/// `subtract_unit` is set.
///
/// Panels are at most half a period wide; below k ~ m they shrink to a
/// fraction of max(m, k) so the branch points of 1/ω at ±im stay resolved.
fn damped_radial_integral(
    r: f64,
    m: Mass,
    eps: f64,
    k_end: f64,
    rule: &GaussLegendre,
    subtract_unit: bool,
) -> f64 {
    let m2 = m.value() * m.value();
    let profile = |k: f64| {
        let w = m.energy(k);
        if subtract_unit {
            // k/ω - 1 without cancellation
            -m2 / (w * (k + w))
        } else {
            k / w
        }
    };
    let half_period = PI / r;
    let mv = m.value();
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut a = 0.0;
    while a < k_end {
        let width = if mv > 0.0 {
            half_period.min(0.25 * mv.max(a))
        } else {
            half_period
        };
        let b = (a + width).min(k_end);
        let panel: f64 = rule
            .mapped(a, b)
            .map(|(k, w)| w * profile(k) * (k * r).sin() * (-eps * k).exp())
            .sum();
        // Kahan summation over alternating panels
        let y = panel - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        a = b;
    }
    total
}

/// Large-distance form `(m²/(4πλ)) (π/(2λ))^{1/2} e^{-λ}`, λ = m r, taken
/// verbatim, together with its ratio to the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticComparison {
    pub asymptotic: WightmanValue,
    pub closed: f64,
    /// closed / asymptotic.
    pub ratio: f64,
}

pub fn wightman_asymptotic(r: SpacelikeInterval, m: Mass) -> Result<AsymptoticComparison> {
    let mv = m.value();
    if mv <= 0.0 {
        return domain("the exponential asymptotic needs m > 0");
    }
    let lambda = mv * r.value();
    let value = mv * mv / (4.0 * PI * lambda) * (PI / (2.0 * lambda)).sqrt() * (-lambda).exp();
    let closed = wightman_closed(r, m)?.value;
    Ok(AsymptoticComparison {
        asymptotic: WightmanValue {
            value,
            method: WightmanMethod::Asymptotic,
        },
        closed,
        ratio: closed / value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(r: f64) -> SpacelikeInterval {
        SpacelikeInterval::new(r).unwrap()
    }

    fn mass(m: f64) -> Mass {
        Mass::new(m).unwrap()
    }

    #[test]
    fn closed_form_reference_points() {
        let w = wightman_closed(iv(1.0), mass(1.0)).unwrap().value;
        assert!((w - 0.601_907_230_197_234_6 / (4.0 * PI * PI)).abs() < 1e-15);
        assert!((w - 1.5246e-2).abs() < 1e-6);
        let w0 = wightman_closed(iv(2.0), Mass::massless()).unwrap().value;
        assert!((w0 - 1.0 / (16.0 * PI * PI)).abs() < 1e-17);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        for &(r, m) in &[(1.0, 1.0), (1.0, 0.0), (2.0, 0.0), (0.3, 2.0), (5.0, 0.5)] {
            let q = wightman_quadrature(iv(r), mass(m), QuadratureOptions::default())
                .unwrap()
                .value;
            let c = wightman_closed(iv(r), mass(m)).unwrap().value;
            assert!(((q - c) / c).abs() < 1e-6, "r={r} m={m}: {q} vs {c}");
        }
    }

    #[test]
    fn quadrature_reports_cutoff_starvation() {
        let opts = QuadratureOptions {
            cutoff: 50.0,
            ..Default::default()
        };
        let err = wightman_quadrature(iv(1.0), mass(1.0), opts).unwrap_err();
        assert!(matches!(err, Error::Convergence(_)));
    }

    #[test]
    fn dimensional_scaling() {
        let a = wightman_closed(iv(0.5), mass(2.0)).unwrap().value;
        let b = wightman_closed(iv(1.0), mass(1.0)).unwrap().value;
        assert!((a - 4.0 * b).abs() < 1e-14 * a);
    }

    #[test]
    fn decays_monotonically() {
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let w = wightman_closed(iv(0.25 * i as f64), mass(1.0)).unwrap().value;
            assert!(w > 0.0 && w < prev);
            prev = w;
        }
    }

    #[test]
    fn asymptotic_requires_mass_and_is_off_at_small_lambda() {
        assert!(wightman_asymptotic(iv(1.0), Mass::massless()).is_err());
        let c = wightman_asymptotic(iv(1.0), mass(1.0)).unwrap();
        assert!((c.asymptotic.value - c.closed).abs() / c.closed > 0.1);
    }

    #[test]
    fn asymptotic_ratio_settles() {
        let ratios: Vec<f64> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&l| wightman_asymptotic(iv(l), mass(1.0)).unwrap().ratio)
            .collect();
        assert!((ratios[2] - ratios[1]).abs() < (ratios[1] - ratios[0]).abs());
        // K₁ asymptotics put the limit at 1/π
        assert!((ratios[2] - 1.0 / PI).abs() < 0.01 / PI);
    }

    #[test]
    fn interval_guards() {
        assert!(SpacelikeInterval::new(0.0).is_err());
        assert!(SpacelikeInterval::new(-1.0).is_err());
        assert!(SpacelikeInterval::new(1e-7).is_err());
        assert!(Mass::new(-0.1).is_err());
        let s = SpacelikeInterval::from_separation(3.0, 5.0).unwrap();
        assert!((s.value() - 4.0).abs() < 1e-15);
        assert!(SpacelikeInterval::from_separation(5.0, 3.0).is_err());
        assert!(SpacelikeInterval::from_separation(1.0, 1.0).is_err());
    }
}
