//! Bi-orthogonal (Schmidt) decomposition of a bipartite pure state.
//!
//! Left vectors are the eigenvectors of ρ_I; each right vector is obtained by
//! contracting ψ with the conjugate left vector and normalizing, which fixes
//! the relative phase of every pair so that Σ √λ_n φ_n ⊗ χ_n = ψ.

use crate::error::{Error, Result};
use crate::hilbert::{partial_trace, BipartiteSplit, StateVector, Subsystem};
use crate::scalar::{entropy_term, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition<T> {
    lambdas: Vec<T>,
    left: Vec<StateVector<T>>,
    right: Vec<StateVector<T>>,
    split: BipartiteSplit,
    source_dims: Vec<usize>,
}

impl<T: Real> SchmidtDecomposition<T> {
    /// Descending coefficients λ_n (squares of the Schmidt amplitudes), summing to 1.
    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn left_vectors(&self) -> &[StateVector<T>] {
        &self.left
    }

    pub fn right_vectors(&self) -> &[StateVector<T>] {
        &self.right
    }

    pub fn split(&self) -> BipartiteSplit {
        self.split
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_product(&self) -> bool {
        self.rank() == 1
    }

    /// φ_n ⊗ χ_n viewed with the source state's subsystem dimensions.
    pub fn branch_state(&self, n: usize) -> Result<StateVector<T>> {
        self.left[n]
            .tensor(&self.right[n])?
            .reshaped(self.source_dims.clone())
    }

    /// −Σ λ_n ln λ_n in nats; exactly zero for a product state.
    pub fn entanglement_entropy(&self) -> T {
        if self.is_product() {
            return T::zero();
        }
        self.lambdas.iter().copied().map(entropy_term).sum()
    }

    /// Σ √λ_n φ_n ⊗ χ_n
    pub fn reconstruct(&self) -> Result<StateVector<T>> {
        let (d1, d2) = (self.split.d_i(), self.split.d_ii());
        let mut amps = vec![C::<T>::default(); d1 * d2];
        for ((&l, phi), chi) in self.lambdas.iter().zip(&self.left).zip(&self.right) {
            let w = l.sqrt();
            for (x, a) in phi.amplitudes().iter().enumerate() {
                let wa = a.scale(w);
                for (y, b) in chi.amplitudes().iter().enumerate() {
                    amps[x * d2 + y] += wa * b;
                }
            }
        }
        StateVector::normalized(amps, self.source_dims.clone())
    }

    /// max_{m,n} |⟨u_m|u_n⟩ − δ_mn| over both vector families.
    pub fn orthonormality_error(&self) -> T {
        let mut worst = T::zero();
        for family in [&self.left, &self.right] {
            for (m, a) in family.iter().enumerate() {
                for (n, b) in family.iter().enumerate() {
                    let target = if m == n { T::one() } else { T::zero() };
                    let ip = a.inner(b).expect("family vectors share a dimension");
                    worst = worst.max((ip - C::new(target, T::zero())).norm());
                }
            }
        }
        worst
    }
}

pub fn schmidt_decompose<T: Real>(
    psi: &StateVector<T>,
    split: BipartiteSplit,
) -> Result<SchmidtDecomposition<T>> {
    split.check(psi.dim())?;
    let rank_tol = T::tolerances().rank;
    let (d1, d2) = (split.d_i(), split.d_ii());
    let eig = partial_trace(psi, split, Subsystem::I)?.eigen()?;
    let a = psi.amplitudes();

    let mut lambdas = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (n, &lambda) in eig.values.iter().enumerate() {
        if lambda <= rank_tol {
            break;
        }
        let phi = eig.vector(n);
        // (⟨φ_n| ⊗ 1)|ψ⟩ = √λ_n |χ_n⟩
        let chi: Vec<C<T>> = (0..d2)
            .map(|y| (0..d1).map(|x| phi[x].conj() * a[x * d2 + y]).sum())
            .collect();
        let weight: T = chi.iter().map(|z| z.norm_sqr()).sum();
        if weight <= rank_tol {
            return Err(Error::SchmidtPairing {
                index: n,
                weight: weight.to_f64().unwrap_or(f64::NAN),
            });
        }
        lambdas.push(lambda);
        left.push(StateVector::normalized(phi, vec![d1])?);
        right.push(StateVector::normalized(chi, vec![d2])?);
    }
    if lambdas.is_empty() {
        return Err(Error::SchmidtPairing {
            index: 0,
            weight: eig.values.first().and_then(|v| v.to_f64()).unwrap_or(0.0),
        });
    }
    // absorb the weight of truncated coefficients
    let total: T = lambdas.iter().copied().sum();
    for l in lambdas.iter_mut() {
        *l /= total;
    }
    Ok(SchmidtDecomposition {
        lambdas,
        left,
        right,
        split,
        source_dims: psi.dims().to_vec(),
    })
}

pub fn schmidt_rank<T: Real>(dec: &SchmidtDecomposition<T>) -> usize {
    dec.rank()
}

pub fn reconstruct<T: Real>(dec: &SchmidtDecomposition<T>) -> Result<StateVector<T>> {
    dec.reconstruct()
}

pub fn entanglement_entropy<T: Real>(dec: &SchmidtDecomposition<T>) -> T {
    dec.entanglement_entropy()
}

/// Entanglement entropy of `psi` across `split`.
pub fn entropy_across<T: Real>(psi: &StateVector<T>, split: BipartiteSplit) -> Result<T> {
    Ok(schmidt_decompose(psi, split)?.entanglement_entropy())
}

/// Largest elementwise difference between the descending spectra of ρ_I and
/// ρ_II, the shorter spectrum padded with zeros.
pub fn spectra_gap<T: Real>(psi: &StateVector<T>, split: BipartiteSplit) -> Result<T> {
    let s1 = partial_trace(psi, split, Subsystem::I)?.eigen()?.values;
    let s2 = partial_trace(psi, split, Subsystem::II)?.eigen()?.values;
    let len = s1.len().max(s2.len());
    let at = |s: &[T], i: usize| s.get(i).copied().unwrap_or_else(T::zero);
    Ok((0..len)
        .map(|i| (at(&s1, i) - at(&s2, i)).abs())
        .fold(T::zero(), T::max))
}
