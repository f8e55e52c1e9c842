//! Spin correlations, the CHSH functional, and bounded hidden-variable models
//! for the damped correlation `g cos(α - β)`.

mod algebra;
mod chsh;
mod lhv;

pub use algebra::{pauli, sigma_dot, singlet_correlation, spin_correlation, SpinState, UnitVector3};
pub use chsh::{
    chsh, chsh_max_quantum, g_at_chsh_bound, local_realism_necessary_test, ChshOptimum,
    CorrelationMatrix, Verdict, CHSH_CLASSICAL_BOUND, CHSH_SLACK,
};
pub use lhv::{
    lhv_correlation_exact, lhv_correlation_matrix, lhv_monte_carlo, LhvExact, LhvMatrixSample,
    LhvSample, MIN_LHV_SAMPLES,
};

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::error::{domain, Result};

/// Spatial attenuation of the spin correlation, 0 <= g <= 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct GFactor(f64);

impl GFactor {
    pub fn new(g: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&g) {
            return domain(format!("g-factor must lie in [0, 1], got {g}"));
        }
        Ok(Self(g))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> LhvRegime {
        LhvRegime::classify(self)
    }
}

/// Whether `g cos(α - β) = E ξ_α η_β` admits bounded classical variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LhvRegime {
    /// g <= 1/2: the explicit cosine model applies.
    Exists,
    /// 1/2 < g <= 1/√2: neither construction nor CHSH refutation is known.
    Undetermined,
    /// g > 1/√2: CHSH is violated at the optimal angles.
    Impossible,
}

impl LhvRegime {
    pub fn classify(g: GFactor) -> Self {
        let g = g.value();
        if g <= 0.5 {
            Self::Exists
        } else if g <= FRAC_1_SQRT_2 {
            Self::Undetermined
        } else {
            Self::Impossible
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exists => "exists",
            Self::Undetermined => "undetermined",
            Self::Impossible => "impossible",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        let r = |g| GFactor::new(g).unwrap().regime();
        assert_eq!(r(0.0), LhvRegime::Exists);
        assert_eq!(r(0.5), LhvRegime::Exists);
        assert_eq!(r(0.6), LhvRegime::Undetermined);
        assert_eq!(r(FRAC_1_SQRT_2), LhvRegime::Undetermined);
        assert_eq!(r(0.72), LhvRegime::Impossible);
        assert!(GFactor::new(1.01).is_err());
        assert!(GFactor::new(-0.01).is_err());
    }
}
