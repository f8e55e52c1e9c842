use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::Vec3;

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    pub fn new(v: Vec3) -> Result<Self> {
        let n = norm(v);
        if !((n - 1.0).abs() <= UNIT_TOL) {
            return domain(format!("vector {v:?} has norm {n}, expected 1"));
        }
        Ok(Self(v))
    }

    pub fn normalized(v: Vec3) -> Result<Self> {
        let n = norm(v);
        if !(n > 0.0) || !n.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// (cos θ, sin θ, 0): the coplanar settings used by angle-based scans.
    pub fn in_plane(theta: f64) -> Self {
        Self([theta.cos(), theta.sin(), 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(self) -> Vec3 {
        self.0
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }

    pub fn neg(self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

fn norm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

/// σ·a = Σ aᵢ σᵢ.
pub fn sigma_dot(a: UnitVector3) -> Matrix2<Complex64> {
    let [s1, s2, s3] = pauli();
    let [a1, a2, a3] = a.components();
    s1 * Complex64::from(a1) + s2 * Complex64::from(a2) + s3 * Complex64::from(a3)
}

/// Two-qubit pure state in the |00>, |01>, |10>, |11> basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState(Vector4<Complex64>);

impl SpinState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let v = Vector4::from(amplitudes);
        let n = v.norm();
        if !((n - 1.0).abs() <= UNIT_TOL) {
            return domain(format!("spin state has norm {n}, expected 1"));
        }
        Ok(Self(v))
    }

    /// (|01> - |10>)/√2.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        Self(Vector4::new(z, h.into(), (-h).into(), z))
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    /// <ψ|M|ψ>.
    pub fn expectation(&self, op: &Matrix4<Complex64>) -> Complex64 {
        self.0.dotc(&(op * self.0))
    }
}

/// <ψ| σ·a ⊗ σ·b |ψ> by explicit 4×4 algebra.
pub fn spin_correlation(state: &SpinState, a: UnitVector3, b: UnitVector3) -> f64 {
    let op = sigma_dot(a).kronecker(&sigma_dot(b));
    state.expectation(&op).re
}

pub fn singlet_correlation(a: UnitVector3, b: UnitVector3) -> f64 {
    spin_correlation(&SpinState::singlet(), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parallel_axes_anticorrelate() {
        let z = UnitVector3::z();
        assert!((singlet_correlation(z, z) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_axes_uncorrelated() {
        let x = UnitVector3::new([1.0, 0.0, 0.0]).unwrap();
        assert!(singlet_correlation(x, UnitVector3::z()).abs() < 1e-15);
    }

    #[test]
    fn coplanar_angles() {
        let (alpha, beta) = (0.3, 1.4);
        let a = UnitVector3::in_plane(alpha);
        let b = UnitVector3::in_plane(beta);
        assert!((singlet_correlation(a, b) + (alpha - beta).cos()).abs() < 1e-14);
        // flipping one analyser gives the +cos(α-β) convention
        assert!((singlet_correlation(a, b.neg()) - (alpha - beta).cos()).abs() < 1e-14);
    }

    #[test]
    fn singlet_is_normalized_and_rotation_scalar() {
        let s = SpinState::singlet();
        let n: f64 = s.amplitudes().iter().map(|c| c.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-15);
        // single-site spin expectation vanishes
        let id = Matrix2::<Complex64>::identity();
        let op = sigma_dot(UnitVector3::in_plane(PI / 3.0)).kronecker(&id);
        assert!(s.expectation(&op).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unit() {
        assert!(UnitVector3::new([1.0, 1.0, 0.0]).is_err());
        assert!(UnitVector3::normalized([0.0, 0.0, 0.0]).is_err());
        assert!(SpinState::new([Complex64::from(1.0); 4]).is_err());
    }
}
