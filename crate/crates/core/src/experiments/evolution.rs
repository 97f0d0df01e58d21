use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::trial_rng;

use super::mean_and_std_error;

/// Deepest walk enumerated exhaustively in full-branching mode.
pub const MAX_BRANCHING_DEPTH: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkMode {
    /// One sampled outcome per mutation, repeated over seeded trials.
    SingleHistory,
    /// Every outcome sequence realized, each with weight 2^-depth.
    FullBranching,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub depth: usize,
    pub mode: WalkMode,
    /// Highest complexity reached by any history at any step.
    pub max_complexity: u64,
    pub mean_final_complexity: f64,
    pub std_error: Option<f64>,
    pub branch_count: Option<u64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// ±1 mutation with a reflecting barrier at zero complexity.
#[inline]
fn mutate(complexity: u64, up: bool) -> u64 {
    if up {
        complexity + 1
    } else {
        complexity.saturating_sub(1)
    }
}

/// Complexity random walk starting from zero.
pub fn evolution_walk(depth: usize, mode: WalkMode, trials: usize, seed: u64) -> Result<ComplexityReport> {
    match mode {
        WalkMode::FullBranching => full_branching(depth),
        WalkMode::SingleHistory => single_history(depth, trials, seed),
    }
}

fn full_branching(depth: usize) -> Result<ComplexityReport> {
    if depth > MAX_BRANCHING_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "full-branching depth {depth} exceeds {MAX_BRANCHING_DEPTH}"
        )));
    }
    let branches = 1u64 << depth;
    // bit j of the outcome word is the j-th mutation (1 = up)
    let (sum_final, max) = (0..branches)
        .into_par_iter()
        .map(|word| {
            let mut c = 0u64;
            let mut peak = 0u64;
            for j in 0..depth {
                c = mutate(c, (word >> j) & 1 == 1);
                peak = peak.max(c);
            }
            (c, peak)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    Ok(ComplexityReport {
        depth,
        mode: WalkMode::FullBranching,
        max_complexity: max,
        mean_final_complexity: sum_final as f64 / branches as f64,
        std_error: None,
        branch_count: Some(branches),
        trials: None,
        seed: None,
    })
}

fn single_history(depth: usize, trials: usize, seed: u64) -> Result<ComplexityReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let paths: Vec<(u64, u64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut c = 0u64;
            let mut peak = 0u64;
            for _ in 0..depth {
                c = mutate(c, rng.random::<bool>());
                peak = peak.max(c);
            }
            (c, peak)
        })
        .collect();
    let finals: Vec<f64> = paths.iter().map(|&(c, _)| c as f64).collect();
    let (mean, err) = mean_and_std_error(&finals);
    Ok(ComplexityReport {
        depth,
        mode: WalkMode::SingleHistory,
        max_complexity: paths.iter().map(|&(_, p)| p).max().unwrap_or(0),
        mean_final_complexity: mean,
        std_error: Some(err),
        branch_count: None,
        trials: Some(trials),
        seed: Some(seed),
    })
}
