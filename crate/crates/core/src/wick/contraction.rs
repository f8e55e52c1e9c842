//! Cubature for the elementary pairing ∫ d³k/(2ω) ū(k) v(k) of two Gaussian
//! packets.
//!
//! The product ū v is again Gaussian, centred on k_c with width s, times the
//! plane wave e^{ik·l} where l = x_u - x_v. With k = k_c + q the integral is
//! done in spherical coordinates about k_c with the polar axis along l, so the
//! oscillation sits in cos θ alone.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fieldkernel::Mass;
use crate::quad::{GaussLegendre, TanhSinh};
use crate::Vec3;

use super::OnShellAmplitude;

/// e^{-γq²} drops below this at the radial cutoff.
const ENVELOPE_FLOOR: f64 = 1e-16;
const AZIMUTH_NODES: usize = 32;
const MIN_POLAR_NODES: usize = 32;
/// Accepted disagreement between the last two radial refinement levels,
/// relative to the normalized contraction.
const RADIAL_TOL: f64 = 1e-12;

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Unnormalized pairing with amplitudes N = 1, scaled by `scale`.
pub(super) fn raw_pairing(
    u: &OnShellAmplitude,
    v: &OnShellAmplitude,
    mass: Mass,
    scale: f64,
) -> Result<Complex64> {
    let (au, av) = (0.25 / (u.sigma * u.sigma), 0.25 / (v.sigma * v.sigma));
    let gamma = au + av;
    let kc = [0, 1, 2].map(|i| (au * u.momentum[i] + av * v.momentum[i]) / gamma);
    let dk = sub(u.momentum, v.momentum);
    let offset = -dot(dk, dk) / (4.0 * (u.sigma * u.sigma + v.sigma * v.sigma));
    let l = sub(u.centre, v.centre);
    let l_len = norm(l);
    let prefactor = Complex64::from_polar(scale * offset.exp(), dot(kc, l));

    // polar axis along l, else along k_c; the remaining k_c component is
    // perpendicular to it
    let kc_len = norm(kc);
    let axis = if l_len > 0.0 {
        l.map(|c| c / l_len)
    } else if kc_len > 0.0 {
        kc.map(|c| c / kc_len)
    } else {
        [0.0, 0.0, 1.0]
    };
    let kc_par = dot(kc, axis);
    let kc_perp = (kc_len * kc_len - kc_par * kc_par).max(0.0).sqrt();
    let m2 = mass.value() * mass.value();

    let q_max = ((-ENVELOPE_FLOOR.ln()) / gamma).sqrt();
    let polar = GaussLegendre::new(MIN_POLAR_NODES + (0.6 * q_max * l_len).ceil() as usize);
    let azimuth: Vec<(f64, f64)> = if kc_perp <= 1e-14 * (1.0 + kc_len) {
        vec![(0.0, 2.0 * PI)]
    } else {
        GaussLegendre::new(AZIMUTH_NODES).mapped(0.0, PI).map(|(p, w)| (p.cos(), 2.0 * w)).collect()
    };
    let polar_nodes: Vec<(f64, f64)> = polar.mapped(-1.0, 1.0).collect();

    let shell = |q: f64| -> Complex64 {
        let base = m2 + kc_len * kc_len + q * q;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, wc) in &polar_nodes {
            let s = (1.0 - c * c).max(0.0).sqrt();
            let mut ang = 0.0;
            for &(cos_phi, wp) in &azimuth {
                let w2 = base + 2.0 * q * (kc_par * c + kc_perp * s * cos_phi);
                ang += wp / (2.0 * w2.max(0.0).sqrt());
            }
            acc += Complex64::from_polar(ang * wc, q * l_len * c);
        }
        acc * (q * q * (-gamma * q * q).exp())
    };
    let rule = TanhSinh {
        abs_tol: RADIAL_TOL / prefactor.norm().max(f64::MIN_POSITIVE),
        max_level: 12,
        t_max: 3.5,
    };
    let est = rule.integrate(0.0, q_max, shell, |z: Complex64| z.norm());
    if !(est.error * prefactor.norm() <= 1e3 * RADIAL_TOL) || !est.value.is_finite() {
        return Err(Error::Convergence(format!(
            "pairing cubature stalled at error {:.3e}",
            est.error * prefactor.norm()
        )));
    }
    Ok(prefactor * est.value)
}
