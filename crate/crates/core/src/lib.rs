//! Numerical toolkit for correlations between spacelike separated regions.
//!
//! The crate is organised by subsystem:
//!
//! * [`fieldkernel`]: the free scalar vacuum two-point function at spacelike
//!   separation (closed form, oscillatory quadrature, large-distance asymptotic).
//! * [`wick`]: smeared field monomials, Wick pairing sums, polynomial states and
//!   the clustering of connected correlations under translation.
//! * [`spinbell`]: singlet spin correlations, the CHSH functional, and the
//!   explicit bounded hidden-variable model for damped correlations `g cos(α-β)`.
//! * [`spatial`]: detector regions, the spatial g-factor and the factorized
//!   classical model for localized spin measurements.
//! * [`randomfield`]: a lattice complex Gaussian field whose moments reproduce
//!   the vacuum correlators, checked against matrix permanents.
//!
//! Supporting numerics live in [`quad`], [`special`] and [`rng`].

pub mod error;
pub mod fieldkernel;
pub mod quad;
pub mod randomfield;
pub mod rng;
pub mod spatial;
pub mod special;
pub mod spinbell;
pub mod wick;

pub use error::{Error, Result};
pub use fieldkernel::{Mass, SpacelikeInterval, WightmanMethod, WightmanValue};
pub use num_complex::Complex64;
pub use randomfield::{LatticeField, LatticeSpec};
pub use spatial::{GaussianPacket3, Region, TwoParticleDensity};
pub use spinbell::{CorrelationMatrix, GFactor, LhvRegime, SpinState, UnitVector3, Verdict};
pub use wick::{FieldMonomial, OnShellAmplitude, PolynomialState};

/// Three-vector in length or momentum units.
pub type Vec3 = [f64; 3];
