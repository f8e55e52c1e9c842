//! Detector regions and the spatial part of two-particle wave functions.
//!
//! For ψ = ψ_spin · φ(r₁, r₂) the localized spin correlation factorizes as
//! `g(O_A, O_B) · D_spin(a, b)` with `g = ∫_{O_A × O_B} |φ|²`, the probability
//! of finding particle 1 in `O_A` and particle 2 in `O_B`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rng::{map_chunks, McEstimate, RunningStats};
use crate::special::{gaussian_interval_probability, normal_upper_tail};
use crate::spinbell::{singlet_correlation, GFactor, UnitVector3};
use crate::Vec3;

/// Axis-aligned box `lower < r < upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    lower: Vec3,
    upper: Vec3,
}

impl Region {
    pub fn new(lower: Vec3, upper: Vec3) -> Result<Self> {
        let ok = (0..3).all(|i| lower[i].is_finite() && upper[i].is_finite() && lower[i] < upper[i]);
        if !ok {
            return domain(format!("invalid box {lower:?} .. {upper:?}"));
        }
        Ok(Self { lower, upper })
    }

    /// Cube of side `side` centred at `centre`.
    pub fn cube(centre: Vec3, side: f64) -> Result<Self> {
        let h = 0.5 * side;
        Self::new(
            [centre[0] - h, centre[1] - h, centre[2] - h],
            [centre[0] + h, centre[1] + h, centre[2] + h],
        )
    }

    pub fn lower(&self) -> Vec3 {
        self.lower
    }

    pub fn upper(&self) -> Vec3 {
        self.upper
    }

    pub fn translate(&self, l: Vec3) -> Self {
        Self {
            lower: std::array::from_fn(|i| self.lower[i] + l[i]),
            upper: std::array::from_fn(|i| self.upper[i] + l[i]),
        }
    }

    pub fn contains(&self, r: Vec3) -> bool {
        (0..3).all(|i| r[i] > self.lower[i] && r[i] < self.upper[i])
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|i| self.upper[i] - self.lower[i]).product()
    }

    /// Distance from the origin to the closest point of the box.
    pub fn distance_from_origin(&self) -> f64 {
        (0..3)
            .map(|i| {
                let c = 0.0f64.clamp(self.lower[i], self.upper[i]);
                c * c
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains_box(&self, other: &Region) -> bool {
        (0..3).all(|i| other.lower[i] >= self.lower[i] && other.upper[i] <= self.upper[i])
    }
}

/// Isotropic Gaussian single-particle density |ψ|² = N(mean, sd² I).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPacket3 {
    mean: Vec3,
    sd: f64,
}

impl GaussianPacket3 {
    pub fn new(mean: Vec3, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !sd.is_finite() || mean.iter().any(|m| !m.is_finite()) {
            return domain(format!("packet needs finite mean and sd > 0, got sd={sd}"));
        }
        Ok(Self { mean, sd })
    }

    pub fn mean(&self) -> Vec3 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    pub fn translate(&self, l: Vec3) -> Self {
        Self {
            mean: std::array::from_fn(|i| self.mean[i] + l[i]),
            sd: self.sd,
        }
    }

    pub fn density(&self, r: Vec3) -> f64 {
        let s2 = self.sd * self.sd;
        let d2: f64 = (0..3).map(|i| (r[i] - self.mean[i]).powi(2)).sum();
        (-0.5 * d2 / s2).exp() / (TAU * s2).powf(1.5)
    }

    /// ∫_box |ψ|², a product of three one-dimensional interval probabilities.
    pub fn box_probability(&self, region: &Region) -> f64 {
        (0..3)
            .map(|i| gaussian_interval_probability(region.lower[i], region.upper[i], self.mean[i], self.sd))
            .product()
    }

    /// ε = ∫_{|r| >= radius} |ψ|², the mass outside the ball (noncentral χ₃ tail).
    pub fn mass_outside_ball(&self, radius: f64) -> f64 {
        let s = self.sd;
        let d = self.mean.iter().map(|m| m * m).sum::<f64>().sqrt();
        let (lo, hi) = ((radius - d) / s, (radius + d) / s);
        let gauss = |z: f64| (-0.5 * z * z).exp();
        let correction = if d * 1e8 < s {
            // d → 0 limit of the bracket below
            2.0 * radius / (s * (2.0 * PI).sqrt()) * gauss(radius / s)
        } else {
            s / (d * (2.0 * PI).sqrt()) * (gauss(lo) - gauss(hi))
        };
        normal_upper_tail(lo) + normal_upper_tail(hi) + correction
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec3 {
        std::array::from_fn(|i| self.mean[i] + self.sd * rng.sample::<f64, _>(StandardNormal))
    }
}

/// Density |φ(r₁, r₂)|² for the general (possibly entangled) case, estimated by
/// importance sampling from a product-Gaussian proposal.
#[derive(Clone)]
pub struct GeneralDensity {
    pub density: Arc<dyn Fn(Vec3, Vec3) -> f64 + Send + Sync>,
    pub proposal: (GaussianPacket3, GaussianPacket3),
}

impl fmt::Debug for GeneralDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralDensity")
            .field("proposal", &self.proposal)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum TwoParticleDensity {
    Product(GaussianPacket3, GaussianPacket3),
    General(GeneralDensity),
}

/// Samples and seed used when `g_factor` falls back to Monte Carlo.
pub const GENERAL_G_SAMPLES: u64 = 1_000_000;
pub const GENERAL_G_SEED: u64 = 0x5eed;
/// Largest acceptable standard error of a Monte Carlo g-factor.
pub const GENERAL_G_MAX_STDERR: f64 = 2e-3;

impl TwoParticleDensity {
    /// Shifts particle 1 by `l1` and particle 2 by `l2`.
    pub fn translate(&self, l1: Vec3, l2: Vec3) -> Self {
        match self {
            Self::Product(p1, p2) => Self::Product(p1.translate(l1), p2.translate(l2)),
            Self::General(g) => {
                let inner = g.density.clone();
                Self::General(GeneralDensity {
                    density: Arc::new(move |r1: Vec3, r2: Vec3| {
                        inner(
                            std::array::from_fn(|i| r1[i] - l1[i]),
                            std::array::from_fn(|i| r2[i] - l2[i]),
                        )
                    }),
                    proposal: (g.proposal.0.translate(l1), g.proposal.1.translate(l2)),
                })
            }
        }
    }
}

/// g(O_A, O_B) = ∫_{O_A × O_B} |φ|². Closed form for product Gaussians,
/// Monte Carlo otherwise.
pub fn g_factor(rho: &TwoParticleDensity, a: &Region, b: &Region) -> Result<GFactor> {
    match rho {
        TwoParticleDensity::Product(p1, p2) => {
            GFactor::new((p1.box_probability(a) * p2.box_probability(b)).clamp(0.0, 1.0))
        }
        TwoParticleDensity::General(_) => {
            let est = g_factor_monte_carlo(rho, a, b, GENERAL_G_SAMPLES, GENERAL_G_SEED)?;
            if est.stderr > GENERAL_G_MAX_STDERR {
                return Err(Error::Convergence(format!(
                    "g-factor standard error {} exceeds {GENERAL_G_MAX_STDERR}",
                    est.stderr
                )));
            }
            GFactor::new(est.estimate.clamp(0.0, 1.0))
        }
    }
}

/// Monte Carlo g-factor: direct sampling of both packets for the product
/// case, importance sampling from the proposal for the general case.
pub fn g_factor_monte_carlo(
    rho: &TwoParticleDensity,
    a: &Region,
    b: &Region,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let parts = map_chunks(seed, n, |rng, count| {
        let mut s = RunningStats::default();
        for _ in 0..count {
            let v = match rho {
                TwoParticleDensity::Product(p1, p2) => {
                    let (r1, r2) = (p1.sample(rng), p2.sample(rng));
                    f64::from(u8::from(a.contains(r1) && b.contains(r2)))
                }
                TwoParticleDensity::General(g) => {
                    let (q1, q2) = g.proposal;
                    let (r1, r2) = (q1.sample(rng), q2.sample(rng));
                    if a.contains(r1) && b.contains(r2) {
                        (g.density)(r1, r2) / (q1.density(r1) * q2.density(r2))
                    } else {
                        0.0
                    }
                }
            };
            s.push(v);
        }
        s
    });
    Ok(RunningStats::merged(&parts).into())
}

/// g(O_A + d·direction, O_B) for each distance d.
pub fn g_decay_scan(
    rho: &TwoParticleDensity,
    a: &Region,
    b: &Region,
    direction: UnitVector3,
    distances: &[f64],
) -> Result<Vec<GFactor>> {
    if distances.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("scan distances must be strictly increasing");
    }
    let u = direction.components();
    distances
        .iter()
        .map(|&d| g_factor(rho, &a.translate(u.map(|c| c * d)), b))
        .collect()
}

/// ω(σ·a P_{O_A} ⊗ σ·b P_{O_B}) = g(O_A, O_B) · D_spin(a, b) for the singlet.
pub fn local_correlation(
    rho: &TwoParticleDensity,
    region_a: &Region,
    region_b: &Region,
    a: UnitVector3,
    b: UnitVector3,
) -> Result<f64> {
    Ok(g_factor(rho, region_a, region_b)?.value() * singlet_correlation(a, b))
}

/// Inputs of the factorized classical model for localized spin correlations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem8Setup {
    pub psi1: GaussianPacket3,
    pub psi2: GaussianPacket3,
    pub region_a: Region,
    pub region_b: Region,
    /// Radius L of the excluded ball; particle 1 lives on |r₁| >= L.
    pub radius: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Smallest ε accepted; rejection sampling from ψ₁ accepts at rate ε.
pub const MIN_EPSILON: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem8Result {
    /// (E ξ_space)(E η_space)(E ξ_spin(α) ξ_spin(β)).
    pub estimate: f64,
    /// Delta-method standard error of the product.
    pub stderr: f64,
    pub bounds_ok: bool,
    pub epsilon: f64,
    /// g(O_A, O_B) cos(α - β) in closed form.
    pub target: f64,
    pub space_a: McEstimate,
    pub space_b: McEstimate,
    pub spin: McEstimate,
    /// E[ξ(α, O_A) η(β, O_B)] with ξ = ξ_space ξ_spin, η = η_space ξ_spin.
    pub joint: McEstimate,
    pub samples: u64,
}

impl Theorem8Setup {
    /// Checks preconditions and returns ε.
    pub fn epsilon(&self) -> Result<f64> {
        if !(self.radius > 0.0) {
            return Err(Error::Precondition(format!("radius must be > 0, got {}", self.radius)));
        }
        let eps = self.psi1.mass_outside_ball(self.radius);
        if eps >= 0.5 {
            return Err(Error::Precondition(format!(
                "mass of psi1 outside |r| >= {} is {eps} >= 1/2",
                self.radius
            )));
        }
        if eps < MIN_EPSILON {
            return Err(Error::Precondition(format!(
                "mass outside the ball is {eps} < {MIN_EPSILON}; widen psi1 or shrink L"
            )));
        }
        let dist = self.region_a.distance_from_origin();
        if dist < self.radius {
            return Err(Error::Precondition(format!(
                "region A reaches within {dist} of the origin, inside the ball of radius {}",
                self.radius
            )));
        }
        Ok(eps)
    }

    pub fn target(&self) -> f64 {
        self.psi1.box_probability(&self.region_a)
            * self.psi2.box_probability(&self.region_b)
            * (self.alpha - self.beta).cos()
    }
}

/// Monte Carlo realization of the factorized model on B_L × R³ with
/// dP = |ψ₁|²|ψ₂|²/ε and a uniform angle φ on the circle.
pub fn theorem8_model(setup: &Theorem8Setup, n: u64, seed: u64) -> Result<Theorem8Result> {
    let eps = setup.epsilon()?;
    if n < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let amp = (2.0 * eps).sqrt();
    let l2 = setup.radius * setup.radius;
    let parts = map_chunks(seed, n, |rng, count| -> Result<[RunningStats; 4]> {
        let mut s = [RunningStats::default(); 4];
        for _ in 0..count {
            let r1 = loop {
                let r = setup.psi1.sample(rng);
                if r.iter().map(|c| c * c).sum::<f64>() >= l2 {
                    break r;
                }
            };
            let r2 = setup.psi2.sample(rng);
            let phi = rng.random::<f64>() * TAU;
            let xs = f64::from(u8::from(setup.region_a.contains(r1)));
            let ys = f64::from(u8::from(setup.region_b.contains(r2)));
            let spin_a = amp * (setup.alpha - phi).cos();
            let spin_b = amp * (setup.beta - phi).cos();
            let xi = xs * spin_a;
            let eta = ys * spin_b;
            for (name, v) in [("xi_spin", spin_a), ("eta_spin", spin_b), ("xi", xi), ("eta", eta)] {
                if v.abs() > 1.0 {
                    return Err(Error::BoundViolation { variable: name, value: v });
                }
            }
            s[0].push(xs);
            s[1].push(ys);
            s[2].push(spin_a * spin_b);
            s[3].push(xi * eta);
        }
        Ok(s)
    });
    let mut total = [RunningStats::default(); 4];
    for part in parts {
        let part = part?;
        for (t, p) in total.iter_mut().zip(&part) {
            t.merge(p);
        }
    }
    let [space_a, space_b, spin, joint]: [McEstimate; 4] = total.map(McEstimate::from);
    let (x, y, z) = (space_a.estimate, space_b.estimate, spin.estimate);
    let estimate = x * y * z;
    let stderr = ((y * z * space_a.stderr).powi(2)
        + (x * z * space_b.stderr).powi(2)
        + (x * y * spin.stderr).powi(2))
    .sqrt();
    Ok(Theorem8Result {
        estimate,
        stderr,
        bounds_ok: true,
        epsilon: eps,
        target: setup.target(),
        space_a,
        space_b,
        spin,
        joint,
        samples: n,
    })
}
