use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{haar_state_from, trial_rng, StateVector};

use super::mean_and_std_error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub hilbert_dim: usize,
    pub trials: usize,
    pub mean_overlap_sq: f64,
    pub std_error: f64,
    pub seed: u64,
}

/// Mean of |⟨i|f⟩|² over independent Haar-random pairs; its expectation is 1/dim.
pub fn overlap_statistics(dim: usize, trials: usize, seed: u64) -> Result<OverlapReport> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dim must be at least 1".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let (mean, err) = if dim == 1 {
        // every pair of unit vectors in C^1 overlaps with modulus one
        (1.0, 0.0)
    } else {
        let samples = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, t);
                let i: StateVector<f64> = haar_state_from(dim, &mut rng)?;
                let f: StateVector<f64> = haar_state_from(dim, &mut rng)?;
                i.overlap_sq(&f)
            })
            .collect::<Result<Vec<f64>>>()?;
        mean_and_std_error(&samples)
    };
    Ok(OverlapReport {
        hilbert_dim: dim,
        trials,
        mean_overlap_sq: mean,
        std_error: err,
        seed,
    })
}
