//! Brute-force vacuum expectations from explicit ladder matrices in a
//! truncated Fock space over an orthonormal basis of the packets' span.

use nalgebra::{DMatrix, DVector};
use spacelike_core::wick::WickEngine;
use spacelike_core::{Complex64, OnShellAmplitude};

/// Occupation cutoff per mode; exact for products of up to eight fields.
pub const QUANTA: usize = 4;
pub const MAX_MODES: usize = 3;

fn ladder(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// ⟨0|φ[u₁]…φ[uₙ]|0⟩ with at most three distinct packets. Only the Gram
/// matrix of pairings is taken from the engine.
pub fn vacuum_expectation(engine: &WickEngine, factors: &[OnShellAmplitude]) -> anyhow::Result<Complex64> {
    if factors.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut distinct: Vec<OnShellAmplitude> = Vec::new();
    for f in factors {
        if !distinct.contains(f) {
            distinct.push(*f);
        }
    }
    anyhow::ensure!(distinct.len() <= MAX_MODES, "at most {MAX_MODES} distinct packets");
    let k = distinct.len();
    let mut gram = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = engine.contraction(&distinct[i], &distinct[j])?;
        }
    }
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.max();
    let modes: Vec<usize> = (0..k).filter(|&p| eig.eigenvalues[p] > 1e-12 * top).collect();
    // G = L L† with L = V √Λ; packet i creates Σ_p conj(L_ip) b_p†
    let coeff = |i: usize, p: usize| {
        (eig.eigenvectors[(i, modes[p])] * eig.eigenvalues[modes[p]].sqrt()).conj()
    };

    let dim = QUANTA + 1;
    let b = ladder(dim);
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let lowering: Vec<DMatrix<Complex64>> = (0..modes.len())
        .map(|p| {
            (0..modes.len())
                .map(|q| if q == p { b.clone() } else { id.clone() })
                .reduce(|acc, m| acc.kronecker(&m))
                .expect("at least one mode")
        })
        .collect();
    let total = lowering[0].nrows();
    let fields: Vec<DMatrix<Complex64>> = (0..k)
        .map(|i| {
            let mut phi = DMatrix::zeros(total, total);
            for (p, bp) in lowering.iter().enumerate() {
                let x = coeff(i, p);
                phi += bp.adjoint() * x + bp * x.conj();
            }
            phi
        })
        .collect();
    let mut v = DVector::from_element(total, Complex64::new(0.0, 0.0));
    v[0] = Complex64::new(1.0, 0.0);
    for f in factors.iter().rev() {
        let idx = distinct.iter().position(|d| d == f).expect("collected above");
        v = &fields[idx] * v;
    }
    Ok(v[0])
}
