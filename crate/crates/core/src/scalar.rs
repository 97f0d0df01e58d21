//! Real scalar abstraction shared by every numerical routine in the crate.
//!
//! All state, operator and decomposition types are generic over a [`Real`]
//! type; `f64` carries the reference tolerances and `f32` a looser set that
//! matches its precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Reference tolerances for double precision.
pub mod tol {
    /// Allowed deviation of a state norm from 1.
    pub const EPS_NORM: f64 = 1e-12;
    /// Allowed entrywise deviation of a matrix from its adjoint.
    pub const EPS_HERM: f64 = 1e-12;
    /// Eigen-residual, orthonormality and unitarity tolerance.
    pub const EPS_EIG: f64 = 1e-10;
    /// Eigenvalues at or below this value count as exact zeros.
    pub const EPS_RANK: f64 = 1e-10;
    /// Neighbouring eigenvalues closer than this form a degenerate cluster.
    pub const EPS_DEGENERATE: f64 = 1e-9;
    /// Components with modulus above this may carry the phase convention.
    pub const EPS_PHASE: f64 = 1e-9;
}

/// Named numerical tolerances for one scalar type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub norm: T,
    pub hermitian: T,
    pub eig: T,
    pub rank: T,
    pub degenerate: T,
    pub phase: T,
}

/// Floating-point scalar usable as the real part of amplitudes.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn tolerances() -> Tolerances<Self>;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in every Real type")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            norm: tol::EPS_NORM,
            hermitian: tol::EPS_HERM,
            eig: tol::EPS_EIG,
            rank: tol::EPS_RANK,
            degenerate: tol::EPS_DEGENERATE,
            phase: tol::EPS_PHASE,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            norm: 1e-5,
            hermitian: 1e-5,
            eig: 1e-4,
            rank: 1e-5,
            degenerate: 1e-4,
            phase: 1e-4,
        }
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `-x ln x`, with the `x -> 0` limit and exact zero at `x = 1`.
#[inline]
pub fn entropy_term<T: Real>(x: T) -> T {
    if x <= T::zero() || x == T::one() {
        T::zero()
    } else {
        -x * x.ln()
    }
}
