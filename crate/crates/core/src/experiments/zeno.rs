use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{haar_state_from, trial_rng, StateVector};

use super::mean_and_std_error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZenoMode {
    DeterministicPolarizer,
    RandomProjection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZenoReport {
    pub mode: ZenoMode,
    pub n_intermediate: usize,
    pub transmission_probability: f64,
    /// cos^(2N)(π/2N) for the polarizer chain.
    pub closed_form_probability: Option<f64>,
    pub dim: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub std_error: Option<f64>,
}

/// Transmission of a vertically polarized photon through `k` intermediate
/// polarizers at equal angular steps and a final horizontal one, by
/// sequential projection.
pub fn polarizer_chain(k: usize) -> ZenoReport {
    let stages = k + 1;
    let step = std::f64::consts::FRAC_PI_2 / stages as f64;
    let axis = |j: usize| -> StateVector<f64> {
        // end polarizers are exactly vertical and horizontal
        let (s, c) = if j == 0 {
            (0.0, 1.0)
        } else if j == stages {
            (1.0, 0.0)
        } else {
            (j as f64 * step).sin_cos()
        };
        StateVector::from_real(&[c, s]).expect("unit polarization axis")
    };
    let mut probability = 1.0;
    let mut photon = axis(0);
    for j in 1..=stages {
        let lens = axis(j);
        probability *= photon.overlap_sq(&lens).expect("both two-dimensional");
        photon = lens;
    }
    ZenoReport {
        mode: ZenoMode::DeterministicPolarizer,
        n_intermediate: k,
        transmission_probability: probability,
        closed_form_probability: Some(step.cos().powi(2 * stages as i32)),
        dim: Some(2),
        trials: None,
        seed: None,
        std_error: None,
    }
}

/// Mean probability of passing Haar-random rank-1 projections
/// i → P_1 → … → P_k → f, with i, f and every P_j drawn independently.
pub fn random_projection_chain(dim: usize, k: usize, trials: usize, seed: u64) -> Result<ZenoReport> {
    if dim < 2 {
        return Err(Error::InvalidParameter("dim must be at least 2".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            // i and f first, so k = 0 reproduces overlap_statistics draw for draw
            let initial: StateVector<f64> = haar_state_from(dim, &mut rng)?;
            let target: StateVector<f64> = haar_state_from(dim, &mut rng)?;
            let mut p = 1.0;
            let mut current = initial;
            for _ in 0..k {
                let proj = haar_state_from(dim, &mut rng)?;
                p *= current.overlap_sq(&proj)?;
                current = proj;
            }
            Ok(p * current.overlap_sq(&target)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, err) = mean_and_std_error(&samples);
    Ok(ZenoReport {
        mode: ZenoMode::RandomProjection,
        n_intermediate: k,
        transmission_probability: mean,
        closed_form_probability: None,
        dim: Some(dim),
        trials: Some(trials),
        seed: Some(seed),
        std_error: Some(err),
    })
}
