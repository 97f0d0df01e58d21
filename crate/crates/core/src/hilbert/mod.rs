//! Dense state and operator arithmetic on finite tensor-product spaces.

mod density;
pub mod eigen;
mod random;
mod split;
mod state;
mod unitary;

pub use density::{density_of, partial_trace, DensityMatrix};
pub use eigen::{eig_hermitian, HermitianEigen};
pub use random::{
    haar_random_state, haar_random_unitary, haar_state_from, haar_unitary_from, seeded_rng,
    trial_rng, SeededRng,
};
pub use split::{BipartiteSplit, Subsystem};
pub use state::{tensor, StateVector};
pub use unitary::{apply_unitary, UnitaryOperator};

/// Largest total Hilbert-space dimension held in dense storage (2^14).
pub const MAX_DIM: usize = 1 << 14;
