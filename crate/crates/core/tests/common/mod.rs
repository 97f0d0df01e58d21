#![allow(dead_code)]

use everett_core::hilbert::DensityMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues from nalgebra's Hermitian solver, sorted descending.
pub fn oracle_eigenvalues(rho: &DensityMatrix<f64>) -> Vec<f64> {
    let n = rho.dim();
    let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| rho.entries()[[i, j]]);
    let mut v: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// −Σ p ln p written out independently of the library helper.
pub fn shannon_nats(ps: &[f64]) -> f64 {
    let mut s = 0.0;
    for &p in ps {
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    s
}
