//! Branching dynamics of bipartite pure states.
//!
//! * [`hilbert`]: dense states, density matrices, unitaries, Hermitian
//!   eigendecomposition and Haar sampling.
//! * [`schmidt`]: the bi-orthogonal decomposition, its rank and entropy.
//! * [`branching`]: premeasurement unitaries, the branch tree and its entropy
//!   ledger.
//! * [`experiments`]: seeded overlap, Zeno-chain, world-count and
//!   complexity-walk experiments.
//!
//! The numerical core is generic over [`Real`]; the aliases below fix the
//! scalar to `f64` (reference tolerances) or `f32`.

// `!(x < tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branching;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod scalar;
pub mod schmidt;

pub use error::{Error, Result};
pub use scalar::{tol, Real, Tolerances};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type StateVectorF64 = hilbert::StateVector<f64>;
pub type DensityMatrixF64 = hilbert::DensityMatrix<f64>;
pub type UnitaryOperatorF64 = hilbert::UnitaryOperator<f64>;
pub type SchmidtDecompositionF64 = schmidt::SchmidtDecomposition<f64>;
pub type BranchTreeF64 = branching::BranchTree<f64>;
pub type BranchNodeF64 = branching::BranchNode<f64>;
pub type EntropyLedgerF64 = branching::EntropyLedger<f64>;
pub type ChainProtocolF64 = branching::ChainProtocol<f64>;

pub type StateVectorF32 = hilbert::StateVector<f32>;
pub type DensityMatrixF32 = hilbert::DensityMatrix<f32>;
pub type UnitaryOperatorF32 = hilbert::UnitaryOperator<f32>;
pub type SchmidtDecompositionF32 = schmidt::SchmidtDecomposition<f32>;
pub type BranchTreeF32 = branching::BranchTree<f32>;
pub type EntropyLedgerF32 = branching::EntropyLedger<f32>;
