//! Seeded Monte Carlo and closed-form experiments.
//!
//! Every stochastic trial draws from its own generator stream
//! ([`trial_rng`](crate::hilbert::trial_rng)), and per-trial results are
//! reduced in trial order, so reports are identical for any worker count.

mod evolution;
mod overlap;
mod worlds;
mod zeno;

pub use evolution::{evolution_walk, ComplexityReport, WalkMode, MAX_BRANCHING_DEPTH};
pub use overlap::{overlap_statistics, OverlapReport};
pub use worlds::{
    world_count, GrowthModel, WorldCountConfig, WorldCountReport, DEFAULT_PLANCK_TIME_S,
    DEFAULT_UNIVERSE_AGE_S,
};
pub use zeno::{polarizer_chain, random_projection_chain, ZenoMode, ZenoReport};

/// Sample mean and standard error of the mean, summed in slice order.
pub(crate) fn mean_and_std_error(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_error_of_small_sample() {
        let (m, e) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sample variance 5/3, standard error sqrt(5/12)
        assert!((e - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_and_std_error(&[7.0]), (7.0, 0.0));
    }
}
