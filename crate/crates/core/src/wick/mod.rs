//! Vacuum expectations of smeared free scalar fields.
//!
//! A factor φ[u] = ∫ d³k/√(2ω) (u(k) a*(k) + ū(k) a(k)) is built from a
//! Gaussian on-shell amplitude u. Products of factors are evaluated by summing
//! over perfect pairings of the elementary contraction
//! C(u, v) = ⟨0|φ[u]φ[v]|0⟩ = ∫ d³k/(2ω) ū(k) v(k).

mod contraction;
pub mod pairing;

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fieldkernel::Mass;
use crate::Vec3;

pub use pairing::{double_factorial_odd, for_each_pairing, pairing_sum};

/// Default cap on the number of field factors in one vacuum expectation.
pub const DEFAULT_MAX_FACTORS: usize = 12;

/// Gaussian packet u(k) = N exp(-|k-k₀|²/(4σ²)) e^{-ik·x₀}.
///
/// N is not stored: it depends on the mass and is fixed inside every
/// contraction so that C(u, u) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OnShellAmplitude {
    centre: Vec3,
    momentum: Vec3,
    sigma: f64,
}

impl OnShellAmplitude {
    pub fn new(centre: Vec3, momentum: Vec3, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return domain(format!("packet width must be > 0, got {sigma}"));
        }
        if centre.iter().chain(&momentum).any(|c| !c.is_finite()) {
            return domain("packet centre and momentum must be finite");
        }
        Ok(Self {
            centre,
            momentum,
            sigma,
        })
    }

    /// Packet at rest at the origin.
    pub fn at_origin(sigma: f64) -> Result<Self> {
        Self::new([0.0; 3], [0.0; 3], sigma)
    }

    pub fn centre(&self) -> Vec3 {
        self.centre
    }

    pub fn momentum(&self) -> Vec3 {
        self.momentum
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Position-space width 1/(2σ).
    pub fn sigma_x(&self) -> f64 {
        0.5 / self.sigma
    }

    pub fn translate(&self, l: Vec3) -> Self {
        Self {
            centre: [0, 1, 2].map(|i| self.centre[i] + l[i]),
            ..*self
        }
    }

    fn key(&self) -> [u64; 7] {
        let [a, b, c] = self.centre;
        let [d, e, f] = self.momentum;
        [a, b, c, d, e, f, self.sigma].map(f64::to_bits)
    }
}

/// Ordered product φ[u₁]…φ[uₙ].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FieldMonomial {
    factors: Vec<OnShellAmplitude>,
}

impl FieldMonomial {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<OnShellAmplitude>) -> Self {
        Self { factors }
    }

    /// φ[u]ⁿ.
    pub fn power(u: OnShellAmplitude, n: usize) -> Self {
        Self::new(vec![u; n])
    }

    pub fn factors(&self) -> &[OnShellAmplitude] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Adjoint: every factor is hermitian, so only the order flips.
    pub fn adjoint(&self) -> Self {
        Self::new(self.factors.iter().rev().copied().collect())
    }

    pub fn then(&self, other: &Self) -> Self {
        Self::new(self.factors.iter().chain(&other.factors).copied().collect())
    }

    pub fn translate(&self, l: Vec3) -> Self {
        Self::new(self.factors.iter().map(|u| u.translate(l)).collect())
    }
}

/// |ψ⟩ = C|0⟩ with its squared norm ⟨0|C†C|0⟩.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialState {
    creator: FieldMonomial,
    norm2: f64,
    mass: Mass,
}

impl PolynomialState {
    pub fn vacuum(mass: Mass) -> Self {
        Self {
            creator: FieldMonomial::identity(),
            norm2: 1.0,
            mass,
        }
    }

    pub fn creator(&self) -> &FieldMonomial {
        &self.creator
    }

    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    pub fn mass(&self) -> Mass {
        self.mass
    }
}

type PairKey = ([u64; 7], [u64; 7]);

/// Contraction evaluator with a thread-safe cache, bound to one mass.
#[derive(Debug)]
pub struct WickEngine {
    mass: Mass,
    max_factors: usize,
    pairs: Mutex<HashMap<PairKey, Complex64>>,
    norms: Mutex<HashMap<[u64; 4], f64>>,
}

impl WickEngine {
    pub fn new(mass: Mass) -> Self {
        Self {
            mass,
            max_factors: DEFAULT_MAX_FACTORS,
            pairs: Mutex::new(HashMap::new()),
            norms: Mutex::new(HashMap::new()),
        }
    }

    /// Raises or lowers the factor cap.
    pub fn with_max_factors(mut self, n: usize) -> Self {
        self.max_factors = n;
        self
    }

    pub fn mass(&self) -> Mass {
        self.mass
    }

    pub fn max_factors(&self) -> usize {
        self.max_factors
    }

    fn raw_norm(&self, u: &OnShellAmplitude) -> Result<f64> {
        let [a, b, c] = u.momentum.map(f64::to_bits);
        let key = [a, b, c, u.sigma.to_bits()];
        if let Some(&n) = self.norms.lock().unwrap().get(&key) {
            return Ok(n);
        }
        let at_origin = OnShellAmplitude {
            centre: [0.0; 3],
            ..*u
        };
        // scale so the tanh-sinh tolerance is relative
        let probe = contraction::raw_pairing(&at_origin, &at_origin, self.mass, 1.0)?;
        let n = contraction::raw_pairing(&at_origin, &at_origin, self.mass, 1.0 / probe.re)?.re
            * probe.re;
        self.norms.lock().unwrap().insert(key, n);
        Ok(n)
    }

    /// C(u, v) with both packets normalized.
    pub fn contraction(&self, u: &OnShellAmplitude, v: &OnShellAmplitude) -> Result<Complex64> {
        let (ku, kv) = (u.key(), v.key());
        if ku == kv {
            return Ok(Complex64::new(1.0, 0.0));
        }
        // evaluate one orientation only so hermiticity is exact
        let (first, second, flip) = if ku < kv { (u, v, false) } else { (v, u, true) };
        let key = (first.key(), second.key());
        let cached = self.pairs.lock().unwrap().get(&key).copied();
        let value = match cached {
            Some(c) => c,
            None => {
                let scale = 1.0 / (self.raw_norm(first)? * self.raw_norm(second)?).sqrt();
                let c = contraction::raw_pairing(first, second, self.mass, scale)?;
                self.pairs.lock().unwrap().insert(key, c);
                c
            }
        };
        Ok(if flip { value.conj() } else { value })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n > self.max_factors {
            return Err(Error::SizeLimit {
                what: "field factors",
                got: n,
                limit: self.max_factors,
            });
        }
        Ok(())
    }

    /// ⟨0|φ[u₁]…φ[uₙ]|0⟩ as a sum over perfect pairings.
    pub fn vacuum_expectation(&self, mono: &FieldMonomial) -> Result<Complex64> {
        let n = mono.len();
        self.check_len(n)?;
        if n % 2 == 1 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let f = mono.factors();
        let mut table = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i + 1..n {
                table[i * n + j] = self.contraction(&f[i], &f[j])?;
            }
        }
        Ok(pairing_sum(n, &|i, j| table[i * n + j]))
    }

    pub fn state(&self, creator: FieldMonomial) -> Result<PolynomialState> {
        let norm2 = self.vacuum_expectation(&creator.adjoint().then(&creator))?.re;
        if !(norm2 > 1e-300) {
            return domain(format!("state C|0> has non-positive norm² {norm2}"));
        }
        Ok(PolynomialState {
            creator,
            norm2,
            mass: self.mass,
        })
    }

    fn check_state(&self, state: &PolynomialState) -> Result<()> {
        if state.mass != self.mass {
            return Err(Error::Precondition(format!(
                "state built for m = {}, engine has m = {}",
                state.mass.value(),
                self.mass.value()
            )));
        }
        Ok(())
    }

    /// ω(A) = ⟨0|C† A C|0⟩ / ‖C|0⟩‖².
    pub fn state_expectation(&self, state: &PolynomialState, a: &FieldMonomial) -> Result<Complex64> {
        self.check_state(state)?;
        let c = state.creator();
        let mono = c.adjoint().then(a).then(c);
        Ok(self.vacuum_expectation(&mono)? / state.norm2)
    }

    /// |ω(A(l)B) − ω(A(l))ω(B)|.
    pub fn correlation_gap(
        &self,
        state: &PolynomialState,
        a: &FieldMonomial,
        b: &FieldMonomial,
        l: Vec3,
    ) -> Result<f64> {
        self.check_len(2 * state.creator().len() + a.len() + b.len())?;
        let al = a.translate(l);
        let joint = self.state_expectation(state, &al.then(b))?;
        let split = self.state_expectation(state, &al)? * self.state_expectation(state, b)?;
        Ok((joint - split).norm())
    }

    /// |ω(A(l)) − ⟨0|A(l)|0⟩|.
    pub fn vacuum_drift(&self, state: &PolynomialState, a: &FieldMonomial, l: Vec3) -> Result<f64> {
        let al = a.translate(l);
        Ok((self.state_expectation(state, &al)? - self.vacuum_expectation(&al)?).norm())
    }

    /// Clustering table along `direction` (normalized internally), evaluated
    /// in parallel. Rows follow the order of `distances`.
    pub fn cluster_scan(
        &self,
        state: &PolynomialState,
        a: &FieldMonomial,
        b: &FieldMonomial,
        direction: Vec3,
        distances: &[f64],
    ) -> Result<Vec<ClusterRow>> {
        let len = (direction[0].powi(2) + direction[1].powi(2) + direction[2].powi(2)).sqrt();
        if !(len > 0.0) || !len.is_finite() {
            return domain("scan direction must be a non-zero vector");
        }
        let dir = direction.map(|c| c / len);
        distances
            .par_iter()
            .map(|&d| {
                let l = dir.map(|c| c * d);
                let al = a.translate(l);
                Ok(ClusterRow {
                    distance: d,
                    gap: self.correlation_gap(state, a, b, l)?,
                    state_value: self.state_expectation(state, &al)?,
                    vacuum_value: self.vacuum_expectation(&al)?,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterRow {
    pub distance: f64,
    pub gap: f64,
    /// ω(A(l)).
    pub state_value: Complex64,
    /// ⟨0|A(l)|0⟩.
    pub vacuum_value: Complex64,
}

pub fn contraction(u: &OnShellAmplitude, v: &OnShellAmplitude, m: Mass) -> Result<Complex64> {
    WickEngine::new(m).contraction(u, v)
}

pub fn vacuum_expectation(mono: &FieldMonomial, m: Mass) -> Result<Complex64> {
    WickEngine::new(m).vacuum_expectation(mono)
}

pub fn state_expectation(state: &PolynomialState, a: &FieldMonomial) -> Result<Complex64> {
    WickEngine::new(state.mass()).state_expectation(state, a)
}

pub fn correlation_gap(
    state: &PolynomialState,
    a: &FieldMonomial,
    b: &FieldMonomial,
    l: Vec3,
) -> Result<f64> {
    WickEngine::new(state.mass()).correlation_gap(state, a, b, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    fn m1() -> Mass {
        Mass::new(1.0).unwrap()
    }

    /// Packets at rest: the angular integral is 2 sin(ql)/(ql), leaving a
    /// one-dimensional radial integral.
    fn radial_oracle(sigma: f64, l: f64, m: f64) -> f64 {
        let rule = GaussLegendre::new(40);
        let gamma = 0.5 / (sigma * sigma);
        let q_max = (40.0 / gamma).sqrt();
        let f = |q: f64, l: f64| {
            let ang = if l == 0.0 { 2.0 } else { 2.0 * (q * l).sin() / (q * l) };
            q * q * (-gamma * q * q).exp() * ang / (2.0 * (m * m + q * q).sqrt())
        };
        let panels = 200;
        let h = q_max / panels as f64;
        let int = |l: f64| -> f64 {
            (0..panels)
                .map(|p| rule.integrate(p as f64 * h, (p + 1) as f64 * h, |q| f(q, l)))
                .sum()
        };
        int(l) / int(0.0)
    }

    #[test]
    fn normalization_and_radial_oracle() {
        let e = WickEngine::new(m1());
        let u = OnShellAmplitude::at_origin(1.0).unwrap();
        assert_eq!(e.contraction(&u, &u).unwrap(), Complex64::new(1.0, 0.0));
        for l in [0.5, 2.0, 5.0, 10.0] {
            let v = u.translate([0.0, l, 0.0]);
            let c = e.contraction(&u, &v).unwrap();
            let want = radial_oracle(1.0, l, 1.0);
            assert!((c.re - want).abs() < 1e-10 * want.abs().max(1e-6), "l={l}: {c} vs {want}");
            assert!(c.im.abs() < 1e-12);
        }
    }

    #[test]
    fn moving_packets_are_hermitian_and_rotation_invariant() {
        let e = WickEngine::new(Mass::new(0.7).unwrap());
        let u = OnShellAmplitude::new([0.1, 0.0, 0.0], [0.5, -0.3, 0.2], 0.8).unwrap();
        let v = OnShellAmplitude::new([1.0, 2.0, -0.5], [0.0, 0.4, 0.0], 1.1).unwrap();
        let uv = e.contraction(&u, &v).unwrap();
        let vu = e.contraction(&v, &u).unwrap();
        assert!((uv - vu.conj()).norm() < 1e-15);
        // packets with k₀ = 0 only: |C| then depends on |l| alone
        let a = OnShellAmplitude::at_origin(1.0).unwrap();
        let c1 = e.contraction(&a, &a.translate([3.0, 0.0, 0.0])).unwrap().norm();
        let c2 = e.contraction(&a, &a.translate([0.0, 1.8, 2.4])).unwrap().norm();
        assert!((c1 - c2).abs() < 1e-12);
    }

    #[test]
    fn wick_small_cases() {
        let e = WickEngine::new(m1());
        let u = OnShellAmplitude::at_origin(1.0).unwrap();
        let v = u.translate([1.0, 0.5, 0.0]);
        let four = e.vacuum_expectation(&FieldMonomial::power(u, 4)).unwrap();
        assert!((four - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let two = e.vacuum_expectation(&FieldMonomial::new(vec![u, v])).unwrap();
        assert_eq!(two, e.contraction(&u, &v).unwrap());
        assert_eq!(e.vacuum_expectation(&FieldMonomial::power(u, 3)).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(e.vacuum_expectation(&FieldMonomial::identity()).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(
            e.vacuum_expectation(&FieldMonomial::power(u, 14)),
            Err(Error::SizeLimit { .. })
        ));
        let big = WickEngine::new(m1()).with_max_factors(14);
        let v14 = big.vacuum_expectation(&FieldMonomial::power(u, 14)).unwrap();
        assert!((v14.re - 135135.0).abs() < 1e-6);
    }

    #[test]
    fn vacuum_gap_follows_contraction() {
        let e = WickEngine::new(m1());
        let u = OnShellAmplitude::at_origin(1.0).unwrap();
        let vac = PolynomialState::vacuum(m1());
        let a = FieldMonomial::power(u, 2);
        let g0 = e.correlation_gap(&vac, &a, &a, [0.0; 3]).unwrap();
        assert!((g0 - 2.0).abs() < 1e-12);
        let l = [0.0, 0.0, 4.0];
        let c = e.contraction(&u.translate(l), &u).unwrap();
        let g = e.correlation_gap(&vac, &a, &a, l).unwrap();
        assert!((g - 2.0 * c.norm_sqr()).abs() < 1e-12);
        let gfar = e.correlation_gap(&vac, &a, &a, [0.0, 0.0, 20.0 * u.sigma_x()]).unwrap();
        assert!(gfar < 1e-6, "{gfar}");
    }

    #[test]
    fn state_normalization() {
        let e = WickEngine::new(m1());
        let w = OnShellAmplitude::new([0.0; 3], [0.3, 0.0, 0.0], 1.0).unwrap();
        let s = e.state(FieldMonomial::power(w, 1)).unwrap();
        let one = e.state_expectation(&s, &FieldMonomial::identity()).unwrap();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let u = OnShellAmplitude::at_origin(1.0).unwrap();
        let vac = PolynomialState::vacuum(m1());
        let uu = e.state_expectation(&vac, &FieldMonomial::power(u, 2)).unwrap();
        assert!((uu - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let other = WickEngine::new(Mass::new(2.0).unwrap());
        assert!(other.state_expectation(&s, &FieldMonomial::identity()).is_err());
    }
}
