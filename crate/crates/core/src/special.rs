//! Special functions: modified Bessel K₁ and Gaussian interval probabilities.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use libm::erfc;

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the power series and the Steed continued fraction.
const SERIES_LIMIT: f64 = 2.0;

/// Modified Bessel function of the second kind, order one.
///
/// Power series for `x <= 2`, Steed's continued fraction (Temme's CF2) above.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("bessel_k1 requires finite x > 0, got {x}"));
    }
    Ok(if x <= SERIES_LIMIT {
        k1_series(x)
    } else {
        k01_continued_fraction(x).1
    })
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("bessel_k0 requires finite x > 0, got {x}"));
    }
    Ok(if x <= SERIES_LIMIT {
        k0_series(x)
    } else {
        k01_continued_fraction(x).0
    })
}

fn k1_series(x: f64) -> f64 {
    // K1(x) = 1/x + ln(x/2) I1(x) - (x/4) Σ [ψ(k+1)+ψ(k+2)] (x²/4)^k / (k!(k+1)!)
    let y = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)^k / (k!(k+1)!)
    let mut psi_k1 = -EULER_GAMMA; // ψ(k+1)
    let mut psi_k2 = 1.0 - EULER_GAMMA; // ψ(k+2)
    let mut i1_sum = 0.0;
    let mut psi_sum = 0.0;
    for k in 0..60 {
        i1_sum += term;
        psi_sum += (psi_k1 + psi_k2) * term;
        let kf = k as f64;
        term *= y / ((kf + 1.0) * (kf + 2.0));
        psi_k1 += 1.0 / (kf + 1.0);
        psi_k2 += 1.0 / (kf + 2.0);
        if term < 1e-18 * i1_sum {
            break;
        }
    }
    let i1 = 0.5 * x * i1_sum;
    1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * psi_sum
}

fn k0_series(x: f64) -> f64 {
    // K0(x) = -(ln(x/2) + γ) I0(x) + Σ H_k (x²/4)^k / (k!)²
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 0.0;
    let mut h_sum = 0.0;
    for k in 0..60 {
        i0 += term;
        h_sum += harmonic * term;
        let kf = k as f64 + 1.0;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + h_sum
}

/// Steed's algorithm for (K0, K1) at x >= 2.
fn k01_continued_fraction(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Upper tail of the standard normal, Q(z) = P(Z > z).
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

/// P(lo < X < hi) for X ~ N(mean, sd²), accurate in both tails.
pub fn gaussian_interval_probability(lo: f64, hi: f64, mean: f64, sd: f64) -> f64 {
    debug_assert!(sd > 0.0);
    if hi <= lo {
        return 0.0;
    }
    let a = (lo - mean) / sd;
    let b = (hi - mean) / sd;
    if a >= 0.0 {
        normal_upper_tail(a) - normal_upper_tail(b)
    } else if b <= 0.0 {
        normal_upper_tail(-b) - normal_upper_tail(-a)
    } else {
        1.0 - normal_upper_tail(-a) - normal_upper_tail(b)
    }
}
