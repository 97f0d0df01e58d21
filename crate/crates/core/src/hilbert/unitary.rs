use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

use super::eigen::{adjoint, max_identity_deviation};
use super::state::check_dims;
use super::StateVector;

/// Square matrix with U^H U = I to within the eigen tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator<T> {
    entries: Array2<C<T>>,
}

impl<T: Real> UnitaryOperator<T> {
    pub fn new(entries: Array2<C<T>>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::Shape(format!("operator must be square and non-empty, got {r}x{c}")));
        }
        check_dims(&[r])?;
        let deviation = max_identity_deviation(&adjoint(&entries).dot(&entries));
        if !(deviation < T::tolerances().eig) {
            return Err(Error::NonUnitary {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_raw(entries: Array2<C<T>>) -> Self {
        Self { entries }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dims(&[dim])?;
        Ok(Self::from_raw(Array2::from_shape_fn((dim, dim), |(i, j)| {
            if i == j {
                re(T::one())
            } else {
                C::default()
            }
        })))
    }

    /// Permutation operator sending basis index `j` to `image(j)`.
    pub fn permutation(dim: usize, image: impl Fn(usize) -> usize) -> Result<Self> {
        check_dims(&[dim])?;
        let mut m = Array2::zeros((dim, dim));
        let mut hit = vec![false; dim];
        for j in 0..dim {
            let i = image(j);
            if i >= dim || hit[i] {
                return Err(Error::InvalidParameter(format!(
                    "map is not a permutation of 0..{dim}"
                )));
            }
            hit[i] = true;
            m[[i, j]] = re(T::one());
        }
        Ok(Self::from_raw(m))
    }

    /// Real rotation by `angle` in the plane of basis states 0 and 1,
    /// identity elsewhere: |0⟩ ↦ cos|0⟩ + sin|1⟩.
    pub fn plane_rotation(dim: usize, angle: T) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("plane rotation needs dimension ≥ 2".into()));
        }
        let mut u = Self::identity(dim)?;
        let (s, c) = angle.sin_cos();
        u.entries[[0, 0]] = re(c);
        u.entries[[1, 0]] = re(s);
        u.entries[[0, 1]] = re(-s);
        u.entries[[1, 1]] = re(c);
        Ok(u)
    }

    pub fn entries(&self) -> &Array2<C<T>> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_raw(adjoint(&self.entries))
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self::from_raw(self.entries.dot(&other.entries)))
    }

    /// `self ⊗ other`
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let (n, m) = (self.dim(), other.dim());
        check_dims(&[n, m])?;
        Ok(Self::from_raw(Array2::from_shape_fn((n * m, n * m), |(r, c)| {
            self.entries[[r / m, c / m]] * other.entries[[r % m, c % m]]
        })))
    }

    pub fn unitarity_error(&self) -> T {
        max_identity_deviation(&adjoint(&self.entries).dot(&self.entries))
    }

    /// U|ψ⟩, keeping ψ's subsystem dimensions.
    pub fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        let out = self
            .entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(psi.amplitudes()).map(|(u, a)| u * a).sum())
            .collect();
        StateVector::normalized(out, psi.dims().to_vec())
    }
}

/// U|ψ⟩
pub fn apply_unitary<T: Real>(u: &UnitaryOperator<T>, psi: &StateVector<T>) -> Result<StateVector<T>> {
    u.apply(psi)
}
