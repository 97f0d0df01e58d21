mod common;

use common::oracle_eigenvalues;
use everett_core::hilbert::{
    apply_unitary, density_of, eig_hermitian, haar_random_state, haar_random_unitary,
    partial_trace, BipartiteSplit, StateVector, Subsystem,
};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn haar_unitaries_preserve_norm() {
    for seed in 0..100u64 {
        let dim = 2 + (seed as usize % 15);
        let u = haar_random_unitary::<f64>(dim, seed).unwrap();
        let psi = haar_random_state::<f64>(dim, 1000 + seed).unwrap();
        // raw matrix-vector product, no renormalization
        let raw: f64 = u
            .entries()
            .rows()
            .into_iter()
            .map(|row| {
                row.iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        assert!((raw - 1.0).abs() < 1e-12, "seed {seed}: raw norm {raw}");
        let out = apply_unitary(&u, &psi).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn reduced_spectra_agree_with_independent_solver() {
    let split = BipartiteSplit::new(4, 6).unwrap();
    for seed in 0..50 {
        let psi = haar_random_state::<f64>(24, seed).unwrap();
        let r1 = partial_trace(&psi, split, Subsystem::I).unwrap();
        let r2 = partial_trace(&psi, split, Subsystem::II).unwrap();
        let o1 = oracle_eigenvalues(&r1);
        let o2 = oracle_eigenvalues(&r2);
        for (i, l) in o1.iter().enumerate() {
            assert!((l - o2[i]).abs() < 1e-10);
        }
        assert!(o2[4..].iter().all(|l| l.abs() < 1e-10));
        // library solver against the oracle
        let e1 = r1.eigen().unwrap().values;
        for (a, b) in e1.iter().zip(&o1) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((r1.trace() - 1.0).abs() < 1e-12 && (r2.trace() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn random_density_eigen_residuals() {
    for seed in 0..40 {
        let psi = haar_random_state::<f64>(48, seed).unwrap();
        let rho = partial_trace(&psi, BipartiteSplit::new(8, 6).unwrap(), Subsystem::I).unwrap();
        let e = eig_hermitian(rho.entries().view()).unwrap();
        assert!(e.max_residual(rho.entries().view()) < 1e-10);
        assert!(e.orthonormality_error() < 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        assert!(*e.values.last().unwrap() >= -1e-10);
        // phase convention
        for n in 0..e.values.len() {
            let v = e.vector(n);
            let first = v.iter().find(|z| z.norm() > 1e-9).unwrap();
            assert!(first.re > 0.0 && first.im == 0.0);
        }
    }
}

#[test]
fn haar_first_component_has_mean_one_over_dim() {
    // |⟨0|ψ⟩|² ~ Beta(1, dim-1) with mean 1/dim
    let n = 100_000u64;
    let xs: Vec<f64> = (0..n)
        .map(|s| haar_random_state::<f64>(2, s).unwrap()[0].norm_sqr())
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - 0.5).abs() < 5.0 * se, "mean {mean} se {se}");
}

#[test]
fn density_of_random_state_is_pure() {
    for seed in 0..20 {
        let psi = haar_random_state::<f64>(7, seed).unwrap();
        assert!((density_of(&psi).purity() - 1.0).abs() < 1e-10);
    }
}

fn arb_state(max_dim: usize) -> impl Strategy<Value = StateVector<f64>> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d)
            .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
            .prop_map(move |v| {
                let amps = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                StateVector::new(amps, vec![d]).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn tensor_is_normalized(a in arb_state(6), b in arb_state(6)) {
        let t = a.tensor(&b).unwrap();
        prop_assert!((t.norm() - 1.0).abs() < 1e-12);
        prop_assert_eq!(t.dims().len(), 2);
    }

    #[test]
    fn unitary_preserves_norm(psi in arb_state(12), seed in any::<u64>()) {
        let u = haar_random_unitary::<f64>(psi.dim(), seed).unwrap();
        prop_assert!((u.apply(&psi).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_traces_have_unit_trace(seed in any::<u64>(), d1 in 1usize..8, d2 in 1usize..8) {
        let psi = haar_random_state::<f64>(d1 * d2, seed).unwrap();
        let split = BipartiteSplit::new(d1, d2).unwrap();
        for keep in [Subsystem::I, Subsystem::II] {
            let rho = partial_trace(&psi, split, keep).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), dim in 1usize..32) {
        prop_assert_eq!(
            haar_random_state::<f64>(dim, seed).unwrap(),
            haar_random_state::<f64>(dim, seed).unwrap()
        );
    }
}
