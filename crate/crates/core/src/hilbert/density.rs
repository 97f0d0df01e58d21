use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::{entropy_term, re, Real, C};

use super::eigen::{eig_hermitian, hermitian_deviation, HermitianEigen};
use super::{BipartiteSplit, StateVector, Subsystem};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    entries: Array2<C<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(entries: Array2<C<T>>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::Shape(format!("density matrix must be square and non-empty, got {r}x{c}")));
        }
        let tol = T::tolerances();
        let dm = Self { entries };
        let dev = hermitian_deviation(dm.entries.view());
        if !(dev < tol.hermitian) {
            return Err(Error::NonHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tr = dm.trace();
        if !((tr - T::one()).abs() < tol.norm) {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let smallest = dm.eigen()?.values.last().copied().unwrap_or_else(T::zero);
        if smallest < -tol.rank {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {smallest}"
            )));
        }
        Ok(dm)
    }

    pub(crate) fn from_raw(entries: Array2<C<T>>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &Array2<C<T>> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> T {
        self.entries.diag().iter().map(|x| x.re).sum()
    }

    /// Tr ρ²
    pub fn purity(&self) -> T {
        // Tr ρ² = Σ_ij |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn eigen(&self) -> Result<HermitianEigen<T>> {
        eig_hermitian(self.entries.view())
    }

    /// −Tr ρ ln ρ in nats; eigenvalues at or below the rank threshold count as zero.
    pub fn von_neumann_entropy(&self) -> Result<T> {
        let rank_tol = T::tolerances().rank;
        Ok(self
            .eigen()?
            .values
            .into_iter()
            .filter(|&l| l > rank_tol)
            .map(entropy_term)
            .sum())
    }
}

/// |ψ⟩⟨ψ|
pub fn density_of<T: Real>(psi: &StateVector<T>) -> DensityMatrix<T> {
    let a = psi.amplitudes();
    let n = a.len();
    DensityMatrix::from_raw(Array2::from_shape_fn((n, n), |(i, j)| a[i] * a[j].conj()))
}

/// Reduced density matrix of one side of `split`, tracing out the other.
pub fn partial_trace<T: Real>(
    psi: &StateVector<T>,
    split: BipartiteSplit,
    keep: Subsystem,
) -> Result<DensityMatrix<T>> {
    split.check(psi.dim())?;
    let (d1, d2) = (split.d_i(), split.d_ii());
    let a = psi.amplitudes();
    let at = |x: usize, y: usize| a[x * d2 + y];
    let mut m: Array2<C<T>> = match keep {
        Subsystem::I => Array2::from_shape_fn((d1, d1), |(x, xp)| {
            (0..d2).map(|y| at(x, y) * at(xp, y).conj()).sum()
        }),
        Subsystem::II => Array2::from_shape_fn((d2, d2), |(y, yp)| {
            (0..d1).map(|x| at(x, y) * at(x, yp).conj()).sum()
        }),
    };
    // the diagonal is a sum of moduli; drop rounding in the imaginary part
    for i in 0..m.nrows() {
        m[[i, i]] = re(m[[i, i]].re);
    }
    Ok(DensityMatrix::from_raw(m))
}
