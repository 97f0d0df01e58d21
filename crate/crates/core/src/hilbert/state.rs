use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

use super::MAX_DIM;

/// Normalized pure state on a tensor-product space.
///
/// Amplitudes are stored in Kronecker order: the first entry of `dims` is the
/// most significant index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<C<T>>,
    dims: Vec<usize>,
}

pub(crate) fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Shape("dimension list is empty".into()));
    }
    let mut total: usize = 1;
    for &d in dims {
        if d == 0 {
            return Err(Error::Shape(format!("subsystem dimension 0 in {dims:?}")));
        }
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_DIM)
            .ok_or(Error::DimensionCap {
                dim: dims.iter().fold(1usize, |a, &b| a.saturating_mul(b)),
                cap: MAX_DIM,
            })?;
    }
    Ok(total)
}

pub(crate) fn norm_of<T: Real>(amps: &[C<T>]) -> T {
    amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
}

impl<T: Real> StateVector<T> {
    /// Normalizes `amplitudes` and attaches the subsystem dimensions.
    pub fn new(amplitudes: Vec<C<T>>, dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::Shape(format!(
                "{} amplitudes for dims {dims:?} (expected {total})",
                amplitudes.len()
            )));
        }
        Self::normalized(amplitudes, dims)
    }

    /// Real amplitudes over a single subsystem.
    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(
            amplitudes.iter().map(|&a| re(a)).collect(),
            vec![amplitudes.len()],
        )
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize, dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if index >= total {
            return Err(Error::Shape(format!(
                "basis index {index} out of range for dimension {total}"
            )));
        }
        let mut amplitudes = vec![C::<T>::default(); total];
        amplitudes[index] = re(T::one());
        Ok(Self { amplitudes, dims })
    }

    /// Scales to unit norm; used after operations that preserve the norm only
    /// up to rounding.
    pub(crate) fn normalized(mut amplitudes: Vec<C<T>>, dims: Vec<usize>) -> Result<Self> {
        let norm = norm_of(&amplitudes);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::DegenerateState);
        }
        if (norm - T::one()).abs() > T::epsilon() {
            let inv = norm.recip();
            for a in amplitudes.iter_mut() {
                *a = a.scale(inv);
            }
        }
        Ok(Self { amplitudes, dims })
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> T {
        norm_of(&self.amplitudes)
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|²
    pub fn overlap_sq(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Kronecker product; subsystem dimensions are concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        check_dims(&dims)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { amplitudes, dims })
    }

    /// Multiplies every amplitude by `e^{i·phase}`.
    pub fn with_global_phase(&self, phase: T) -> Self {
        let w = C::from_polar(T::one(), phase);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * w).collect(),
            dims: self.dims.clone(),
        }
    }

    /// Same amplitudes viewed under a different factorization of the space.
    pub fn reshaped(&self, dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if total != self.dim() {
            return Err(Error::Shape(format!(
                "cannot view a {}-dimensional state as {dims:?}",
                self.dim()
            )));
        }
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            dims,
        })
    }

    /// Euclidean distance to `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> Result<T> {
        let ov = other.inner(self)?;
        let w = if ov.norm() > T::zero() {
            ov / re(ov.norm())
        } else {
            re(T::one())
        };
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b * w).norm_sqr())
            .sum::<T>()
            .sqrt())
    }
}

impl<T> Index<usize> for StateVector<T> {
    type Output = C<T>;

    fn index(&self, i: usize) -> &C<T> {
        &self.amplitudes[i]
    }
}

/// Kronecker product of two states.
pub fn tensor<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<StateVector<T>> {
    a.tensor(b)
}
