//! Lattice complex Gaussian field whose equal-time moments reproduce the free
//! vacuum correlators.
//!
//! Each lattice momentum with |k| < Λ = π/a carries an independent standard
//! complex Gaussian weight scaled by √(Δ³k / ((2π)³ 2ω_k)); an inverse DFT gives
//! ξ(x). Then E ξ(x)ξ*(y) = Σ_k Δ³k/((2π)³ 2ω_k) e^{ik·(x-y)}, a Riemann sum of
//! the cutoff kernel K_Λ, and E ξ(x)ξ(y) = 0. Higher moments are permanents of
//! the two-point matrix.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fieldkernel::Mass;
use crate::quad::GaussLegendre;
use crate::rng::stream_rng;

pub const MIN_POINTS_PER_AXIS: usize = 8;
pub const MAX_MOMENT_ORDER: usize = 4;
pub const MIN_ENSEMBLE: usize = 10_000;
pub const MAX_PERMANENT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSpec {
    n: usize,
    spacing: f64,
    mass: Mass,
}

impl LatticeSpec {
    pub fn new(n: usize, spacing: f64, mass: Mass) -> Result<Self> {
        if n < MIN_POINTS_PER_AXIS || !n.is_power_of_two() {
            return domain(format!("points per axis must be a power of two >= 8, got {n}"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return domain(format!("spacing must be > 0, got {spacing}"));
        }
        if mass.value() == 0.0 {
            // the k = 0 mode would carry infinite weight
            return domain("the lattice field needs m > 0");
        }
        Ok(Self { n, spacing, mass })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mass(&self) -> Mass {
        self.mass
    }

    pub fn cutoff(&self) -> f64 {
        PI / self.spacing
    }

    pub fn sites(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Largest admissible lag per axis, n/4 sites.
    pub fn max_lag(&self) -> usize {
        self.n / 4
    }

    fn momentum(&self, index: usize) -> f64 {
        let j = if index < self.n / 2 {
            index as f64
        } else {
            index as f64 - self.n as f64
        };
        2.0 * PI * j / (self.n as f64 * self.spacing)
    }

    /// Spectral weights c_k = Δ³k / ((2π)³ 2ω_k) of the retained modes, in
    /// row-major site order (zero for discarded modes).
    fn mode_weights(&self) -> Vec<f64> {
        let n = self.n;
        let dk3 = (2.0 * PI / (n as f64 * self.spacing)).powi(3);
        let lambda = self.cutoff();
        let mut w = vec![0.0; self.sites()];
        for ix in 0..n {
            for iy in 0..n {
                for iz in 0..n {
                    let k = [self.momentum(ix), self.momentum(iy), self.momentum(iz)];
                    let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                    if kk < lambda {
                        w[(ix * n + iy) * n + iz] =
                            dk3 / ((2.0 * PI).powi(3) * 2.0 * self.mass.energy(kk));
                    }
                }
            }
        }
        w
    }
}

/// Lattice site, each coordinate taken modulo n.
pub type Site = [i64; 3];

#[derive(Debug, Clone)]
pub struct LatticeField {
    values: Vec<Complex64>,
    spec: LatticeSpec,
    seed: u64,
}

impl LatticeField {
    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, site: Site) -> Complex64 {
        let n = self.spec.n as i64;
        let [x, y, z] = site.map(|c| c.rem_euclid(n) as usize);
        let n = self.spec.n;
        self.values[(x * n + y) * n + z]
    }
}

/// Reusable spectral synthesizer for one lattice.
pub struct SpectralSampler {
    spec: LatticeSpec,
    amplitudes: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl SpectralSampler {
    pub fn new(spec: LatticeSpec) -> Self {
        let amplitudes = spec.mode_weights().into_iter().map(f64::sqrt).collect();
        let fft = FftPlanner::new().plan_fft_inverse(spec.n);
        Self {
            spec,
            amplitudes,
            fft,
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn sample(&self, seed: u64) -> LatticeField {
        let mut rng = stream_rng(seed, 0);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut values: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&amp| {
                if amp == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) * (scale * amp)
                }
            })
            .collect();
        inverse_dft_3d(&mut values, self.spec.n, self.fft.as_ref());
        LatticeField {
            values,
            spec: self.spec,
            seed,
        }
    }
}

pub fn sample_field(spec: LatticeSpec, seed: u64) -> LatticeField {
    SpectralSampler::new(spec).sample(seed)
}

/// Unnormalized inverse DFT along all three axes of a row-major n³ array.
fn inverse_dft_3d(data: &mut [Complex64], n: usize, fft: &dyn Fft<f64>) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // z is contiguous
    fft.process_with_scratch(data, &mut scratch);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for ix in 0..n {
        for iz in 0..n {
            for iy in 0..n {
                line[iy] = data[(ix * n + iy) * n + iz];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for iy in 0..n {
                data[(ix * n + iy) * n + iz] = line[iy];
            }
        }
    }
    for iy in 0..n {
        for iz in 0..n {
            for ix in 0..n {
                line[ix] = data[(ix * n + iy) * n + iz];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for ix in 0..n {
                data[(ix * n + iy) * n + iz] = line[ix];
            }
        }
    }
}

/// Exact two-point function of the lattice sampler, by direct mode summation.
#[derive(Debug, Clone)]
pub struct LatticeKernel {
    spec: LatticeSpec,
    modes: Vec<([f64; 3], f64)>,
}

impl LatticeKernel {
    pub fn new(spec: LatticeSpec) -> Self {
        let n = spec.n;
        let weights = spec.mode_weights();
        let mut modes = Vec::new();
        for ix in 0..n {
            for iy in 0..n {
                for iz in 0..n {
                    let c = weights[(ix * n + iy) * n + iz];
                    if c > 0.0 {
                        modes.push(([spec.momentum(ix), spec.momentum(iy), spec.momentum(iz)], c));
                    }
                }
            }
        }
        Self { spec, modes }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// E ξ(x) ξ*(y).
    pub fn covariance(&self, x: Site, y: Site) -> f64 {
        let a = self.spec.spacing;
        let d = [0, 1, 2].map(|i| (x[i] - y[i]) as f64 * a);
        // the retained mode set is symmetric under k → -k, so the sum is real
        self.modes
            .iter()
            .map(|(k, c)| c * (k[0] * d[0] + k[1] * d[1] + k[2] * d[2]).cos())
            .sum()
    }

    pub fn matrix(&self, xs: &[Site], ys: &[Site]) -> DMatrix<Complex64> {
        DMatrix::from_fn(xs.len(), ys.len(), |i, j| {
            Complex64::from(self.covariance(xs[i], ys[j]))
        })
    }

    /// E ξ(x₁)…ξ(xₙ) ξ*(y₁)…ξ*(yₙ) = perm[K(xᵢ, yⱼ)].
    pub fn moment(&self, xs: &[Site], ys: &[Site]) -> Result<Complex64> {
        check_lengths(xs, ys)?;
        permanent(&self.matrix(xs, ys))
    }
}

/// Continuum cutoff kernel K_Λ(r) = (1/4π²) ∫₀^Λ k²/ω sinc(kr) dk.
pub fn cutoff_kernel(mass: Mass, cutoff: f64, r: f64) -> f64 {
    let rule = GaussLegendre::new(24);
    let panels = 64;
    let h = cutoff / panels as f64;
    let sinc = |x: f64| if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    let sum: f64 = (0..panels)
        .map(|p| {
            rule.integrate(p as f64 * h, (p + 1) as f64 * h, |k| {
                k * k / mass.energy(k) * sinc(k * r)
            })
        })
        .sum();
    sum / (4.0 * PI * PI)
}

/// Ensemble mean of a complex product with separate standard errors for the
/// real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexEstimate {
    pub mean: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: usize,
}

impl ComplexEstimate {
    /// Both components within `k` standard errors of `target`.
    pub fn consistent_with(&self, target: Complex64, k: f64) -> bool {
        (self.mean.re - target.re).abs() <= k * self.stderr_re
            && (self.mean.im - target.im).abs() <= k * self.stderr_im
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexAccumulator {
    count: usize,
    sum: Complex64,
    sum_sq_re: f64,
    sum_sq_im: f64,
}

impl ComplexAccumulator {
    fn push(&mut self, z: Complex64) {
        self.count += 1;
        self.sum += z;
        self.sum_sq_re += z.re * z.re;
        self.sum_sq_im += z.im * z.im;
    }

    fn merge(&mut self, o: &Self) {
        self.count += o.count;
        self.sum += o.sum;
        self.sum_sq_re += o.sum_sq_re;
        self.sum_sq_im += o.sum_sq_im;
    }

    fn finish(&self) -> ComplexEstimate {
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = |sq: f64, m: f64| ((sq / n - m * m) * n / (n - 1.0)).max(0.0);
        ComplexEstimate {
            mean,
            stderr_re: (var(self.sum_sq_re, mean.re) / n).sqrt(),
            stderr_im: (var(self.sum_sq_im, mean.im) / n).sqrt(),
            samples: self.count,
        }
    }
}

/// Points of one moment E ξ(x₁)…ξ(xₙ) ξ*(y₁)…ξ*(yₙ). With `conjugate_ys`
/// unset the y factors enter unconjugated, which probes E ξξ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentQuery {
    pub xs: Vec<Site>,
    pub ys: Vec<Site>,
    pub conjugate_ys: bool,
}

impl MomentQuery {
    pub fn new(xs: Vec<Site>, ys: Vec<Site>) -> Self {
        Self {
            xs,
            ys,
            conjugate_ys: true,
        }
    }

    pub fn unconjugated(xs: Vec<Site>, ys: Vec<Site>) -> Self {
        Self {
            xs,
            ys,
            conjugate_ys: false,
        }
    }

    fn evaluate(&self, field: &LatticeField) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for &x in &self.xs {
            p *= field.at(x);
        }
        for &y in &self.ys {
            let v = field.at(y);
            p *= if self.conjugate_ys { v.conj() } else { v };
        }
        p
    }

    fn validate(&self, spec: &LatticeSpec) -> Result<()> {
        check_lengths(&self.xs, &self.ys)?;
        let n = spec.n as i64;
        let max = spec.max_lag() as i64;
        let pts: Vec<Site> = self.xs.iter().chain(&self.ys).copied().collect();
        for p in &pts {
            for q in &pts {
                for i in 0..3 {
                    let d = (p[i] - q[i]).rem_euclid(n);
                    if d.min(n - d) > max {
                        return domain(format!(
                            "points {p:?} and {q:?} are more than n/4 = {max} sites apart"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_lengths(xs: &[Site], ys: &[Site]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(format!(
            "{} unconjugated points vs {} conjugated",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() > MAX_MOMENT_ORDER {
        return Err(Error::SizeLimit {
            what: "moment order",
            got: xs.len(),
            limit: MAX_MOMENT_ORDER,
        });
    }
    Ok(())
}

/// Mean of the product over an in-memory ensemble.
pub fn empirical_moment(fields: &[LatticeField], xs: &[Site], ys: &[Site]) -> Result<ComplexEstimate> {
    let Some(first) = fields.first() else {
        return Err(Error::Precondition("empty ensemble".into()));
    };
    if fields.len() < MIN_ENSEMBLE {
        return Err(Error::Precondition(format!(
            "ensemble of {} fields, need at least {MIN_ENSEMBLE}",
            fields.len()
        )));
    }
    let q = MomentQuery::new(xs.to_vec(), ys.to_vec());
    q.validate(first.spec())?;
    let mut acc = ComplexAccumulator::default();
    for f in fields {
        acc.push(q.evaluate(f));
    }
    Ok(acc.finish())
}

/// Members per parallel task when streaming an ensemble.
const ENSEMBLE_CHUNK: usize = 32;

/// Streams `size` fields with seeds `master_seed + i` and estimates every
/// query without keeping the fields in memory.
pub fn ensemble_moments(
    spec: LatticeSpec,
    master_seed: u64,
    size: usize,
    queries: &[MomentQuery],
) -> Result<Vec<ComplexEstimate>> {
    if size < MIN_ENSEMBLE {
        return Err(Error::Precondition(format!(
            "ensemble of {size} fields, need at least {MIN_ENSEMBLE}"
        )));
    }
    for q in queries {
        q.validate(&spec)?;
    }
    let sampler = SpectralSampler::new(spec);
    let chunks = size.div_ceil(ENSEMBLE_CHUNK);
    let partials: Vec<Vec<ComplexAccumulator>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![ComplexAccumulator::default(); queries.len()];
            let end = ((c + 1) * ENSEMBLE_CHUNK).min(size);
            for i in c * ENSEMBLE_CHUNK..end {
                let field = sampler.sample(master_seed.wrapping_add(i as u64));
                for (a, q) in acc.iter_mut().zip(queries) {
                    a.push(q.evaluate(&field));
                }
            }
            acc
        })
        .collect();
    let mut total = vec![ComplexAccumulator::default(); queries.len()];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    Ok(total.iter().map(ComplexAccumulator::finish).collect())
}

/// Permanent by Ryser's inclusion–exclusion with Gray-code subset order,
/// O(2ⁿ n).
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::LengthMismatch(format!("{}x{} matrix is not square", n, m.ncols())));
    }
    if n > MAX_PERMANENT {
        return Err(Error::SizeLimit {
            what: "permanent dimension",
            got: n,
            limit: MAX_PERMANENT,
        });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray = 0usize;
    for k in 1..(1usize << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m[(i, col)];
            } else {
                *s -= m[(i, col)];
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if next.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn spec(n: usize) -> LatticeSpec {
        LatticeSpec::new(n, 1.0, Mass::new(1.0).unwrap()).unwrap()
    }

    #[test]
    fn permanent_small_cases() {
        assert_eq!(permanent(&DMatrix::identity(3, 3)).unwrap(), c(1.0));
        assert_eq!(permanent(&DMatrix::from_element(3, 3, c(1.0))).unwrap(), c(6.0));
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        assert_eq!(permanent(&m).unwrap(), c(10.0));
        assert_eq!(permanent(&DMatrix::<Complex64>::zeros(0, 0)).unwrap(), c(1.0));
        assert!(permanent(&DMatrix::<Complex64>::identity(9, 9)).is_err());
        assert!(permanent(&DMatrix::<Complex64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn spec_validation() {
        let m = Mass::new(1.0).unwrap();
        assert!(LatticeSpec::new(12, 1.0, m).is_err());
        assert!(LatticeSpec::new(4, 1.0, m).is_err());
        assert!(LatticeSpec::new(8, 0.0, m).is_err());
        assert!(LatticeSpec::new(8, 1.0, Mass::massless()).is_err());
    }

    #[test]
    fn synthesis_matches_direct_mode_sum() {
        // one sampled field against a brute-force evaluation of its mode sum
        let s = spec(8);
        let sampler = SpectralSampler::new(s);
        let field = sampler.sample(11);
        let mut rng = stream_rng(11, 0);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let n = s.n();
        let mut coeffs = Vec::new();
        for (idx, &amp) in sampler.amplitudes.iter().enumerate() {
            if amp > 0.0 {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let (ix, iy, iz) = (idx / (n * n), (idx / n) % n, idx % n);
                coeffs.push(([ix, iy, iz], Complex64::new(re, im) * (scale * amp)));
            }
        }
        for site in [[0i64, 0, 0], [1, 2, 3], [7, 0, 5]] {
            let direct: Complex64 = coeffs
                .iter()
                .map(|(j, w)| {
                    let phase: f64 = (0..3)
                        .map(|a| 2.0 * PI * (j[a] as f64) * (site[a] as f64) / n as f64)
                        .sum();
                    w * Complex64::from_polar(1.0, phase)
                })
                .sum();
            assert!((direct - field.at(site)).norm() < 1e-13);
        }
    }

    #[test]
    fn kernel_approaches_continuum_cutoff_kernel() {
        let k = LatticeKernel::new(spec(32));
        let lat = k.covariance([0; 3], [0; 3]);
        let cont = cutoff_kernel(Mass::new(1.0).unwrap(), PI, 0.0);
        assert!(((lat - cont) / cont).abs() < 0.01, "{lat} vs {cont}");
    }

    #[test]
    fn moment_query_guards() {
        let q = MomentQuery::new(vec![[0; 3]], vec![[5, 0, 0]]);
        assert!(q.validate(&spec(16)).is_err());
        let q = MomentQuery::new(vec![[0; 3]], vec![]);
        assert!(matches!(q.validate(&spec(16)), Err(Error::LengthMismatch(_))));
        let q = MomentQuery::new(vec![[0; 3]; 5], vec![[0; 3]; 5]);
        assert!(matches!(q.validate(&spec(16)), Err(Error::SizeLimit { .. })));
        assert!(ensemble_moments(spec(8), 0, 10, &[]).is_err());
    }
}
