//! Seeded sampling of Haar-random states and unitaries.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded with `seed_from_u64`.
//! Independent trials of an experiment use stream `trial` of the same key, so
//! every trial is reproducible on its own and the set of trials does not
//! depend on evaluation order. Gaussian deviates come from
//! `rand_distr::StandardNormal`; the crate versions are pinned by the lock file.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

use super::state::check_dims;
use super::{StateVector, UnitaryOperator};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `trial` of an experiment seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SeededRng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(trial);
    rng
}

fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(T::lit(re), T::lit(im))
}

/// Uniform (Haar) random state drawn from `rng`: 2·dim standard Gaussians as
/// real and imaginary parts, then normalized.
pub fn haar_state_from<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<StateVector<T>> {
    if dim == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    check_dims(&[dim])?;
    let amps = (0..dim).map(|_| complex_gaussian(rng)).collect();
    StateVector::normalized(amps, vec![dim])
}

/// Haar random state of dimension `dim`; identical seeds give bit-identical states.
pub fn haar_random_state<T: Real>(dim: usize, seed: u64) -> Result<StateVector<T>> {
    haar_state_from(dim, &mut seeded_rng(seed))
}

/// Haar random unitary: Gram–Schmidt orthonormalization of the columns of a
/// complex Gaussian matrix.
pub fn haar_unitary_from<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryOperator<T>> {
    if dim == 0 {
        return Err(Error::Shape("dimension must be positive".into()));
    }
    check_dims(&[dim])?;
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<C<T>> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: C<T> = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= qi * proj;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::zero()) {
            return Err(Error::DegenerateState);
        }
        let inv = norm.recip();
        cols.push(v.into_iter().map(|x| x.scale(inv)).collect());
    }
    Ok(UnitaryOperator::from_raw(Array2::from_shape_fn((dim, dim), |(i, j)| cols[j][i])))
}

pub fn haar_random_unitary<T: Real>(dim: usize, seed: u64) -> Result<UnitaryOperator<T>> {
    haar_unitary_from(dim, &mut seeded_rng(seed))
}
