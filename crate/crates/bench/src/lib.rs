//! Fixed inputs shared by the benchmarks.

use nalgebra::DMatrix;
use spacelike_core::randomfield::LatticeKernel;
use spacelike_core::{Complex64, LatticeSpec, Mass, OnShellAmplitude};

/// Kernel matrix of n points on a 32³ lattice, the shape used for moments.
pub fn kernel_matrix(n: usize) -> DMatrix<Complex64> {
    let kernel = LatticeKernel::new(lattice(32));
    let xs: Vec<[i64; 3]> = (0..n as i64).map(|i| [i, 0, i % 3]).collect();
    let ys: Vec<[i64; 3]> = (0..n as i64).map(|i| [0, i, 1]).collect();
    kernel.matrix(&xs, &ys)
}

pub fn lattice(n: usize) -> LatticeSpec {
    LatticeSpec::new(n, 1.0, Mass::new(1.0).expect("positive mass")).expect("valid lattice")
}

/// A packet at rest and a displaced moving one.
pub fn packet_pair(separation: f64) -> (OnShellAmplitude, OnShellAmplitude) {
    let u = OnShellAmplitude::new([0.0; 3], [0.0; 3], 1.0).expect("valid packet");
    let v = OnShellAmplitude::new([separation, 0.3, 0.0], [0.2, 0.0, 0.1], 0.8).expect("valid packet");
    (u, v)
}
