use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate state: amplitude vector has zero norm")]
    DegenerateState,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("inconsistent split {d_i}x{d_ii} for a state of total dimension {total}")]
    InconsistentSplit { d_i: usize, d_ii: usize, total: usize },
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NonHermitian { deviation: f64 },
    #[error("matrix is not unitary (max |U^H U - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("pointer overflow: a {device_dim}-level device cannot record {n_outcomes} outcomes")]
    PointerOverflow { n_outcomes: usize, device_dim: usize },
    #[error("dimension {dim} exceeds the dense-storage cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("branch tree would grow to {requested} leaves, above the cap {cap}")]
    TreeCap { requested: usize, cap: usize },
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("Schmidt pairing failed for coefficient {index}: contracted weight {weight:e} at or below the rank threshold")]
    SchmidtPairing { index: usize, weight: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for failures caused by exceeding a configured resource cap.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::DimensionCap { .. } | Error::TreeCap { .. })
    }
}
