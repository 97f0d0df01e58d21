use everett_core::experiments::{
    evolution_walk, overlap_statistics, polarizer_chain, random_projection_chain, world_count,
    GrowthModel, WalkMode, WorldCountConfig,
};

/// Mean final complexity over all 2^depth histories, by explicit recursion.
fn enumerate_mean_final(depth: usize) -> f64 {
    fn go(c: u64, left: usize, weight: f64) -> f64 {
        if left == 0 {
            return weight * c as f64;
        }
        let down = if c == 0 { 0 } else { c - 1 };
        go(c + 1, left - 1, weight / 2.0) + go(down, left - 1, weight / 2.0)
    }
    go(0, depth, 1.0)
}

/// Same quantity from the exact distribution of the reflected walk.
fn distribution_mean_final(depth: usize) -> f64 {
    let mut p = vec![0.0; depth + 2];
    p[0] = 1.0;
    for _ in 0..depth {
        let mut q = vec![0.0; depth + 2];
        for (c, &w) in p.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            q[c + 1] += w / 2.0;
            q[c.saturating_sub(1)] += w / 2.0;
        }
        p = q;
    }
    p.iter().enumerate().map(|(c, w)| c as f64 * w).sum()
}

#[test]
fn overlap_means_match_beta_mean() {
    for dim in [2usize, 64] {
        let r = overlap_statistics(dim, 100_000, 7).unwrap();
        let expect = 1.0 / dim as f64;
        assert!(
            (r.mean_overlap_sq - expect).abs() < 5.0 * r.std_error,
            "dim {dim}: {} ± {}",
            r.mean_overlap_sq,
            r.std_error
        );
    }
}

#[test]
fn qubit_chain_with_one_projection_averages_a_quarter() {
    // independent uniform overlaps, each with mean 1/2
    let r = random_projection_chain(2, 1, 100_000, 5).unwrap();
    assert!((r.transmission_probability - 0.25).abs() < 5.0 * r.std_error.unwrap());
}

#[test]
fn polarizer_values_and_monotonicity() {
    assert_eq!(polarizer_chain(0).transmission_probability, 0.0);
    assert!((polarizer_chain(1).transmission_probability - 0.5f64.powi(2)).abs() < 1e-12);
    // cos²(π/6) = 3/4, cubed
    assert!((polarizer_chain(2).transmission_probability - 0.75f64.powi(3)).abs() < 1e-12);
    let probs: Vec<f64> = (1..=200).map(|k| polarizer_chain(k).transmission_probability).collect();
    assert!(probs.windows(2).all(|w| w[1] > w[0]));
    for k in 50..=200 {
        assert!(probs[k - 1] > 0.95);
        let n = (k + 1) as f64;
        let approx = 1.0 - std::f64::consts::PI.powi(2) / (4.0 * n);
        // next term of the expansion is π⁴/(32N²)
        assert!((probs[k - 1] - approx).abs() < std::f64::consts::PI.powi(4) / (16.0 * n * n));
    }
}

#[test]
fn random_projections_do_not_boost() {
    for k in [1, 2, 4, 8] {
        let r = random_projection_chain(16, k, 20_000, 3).unwrap();
        assert!(r.transmission_probability <= 3.0 / 16.0);
    }
}

#[test]
fn world_count_reference_values_and_monotonicity() {
    let lin = world_count(&WorldCountConfig::default()).unwrap();
    let hand = (4.35e17f64 / 5.39e-44).log10();
    assert!((lin.log10_worlds.unwrap() - hand).abs() < 1e-12);
    assert!((lin.log10_worlds.unwrap() - 60.91).abs() < 0.01);
    let exp = world_count(&WorldCountConfig {
        model: GrowthModel::Exponential,
        ..Default::default()
    })
    .unwrap();
    let hand_exp = (4.35e17f64 / 5.39e-44 * std::f64::consts::E.log10()).log10();
    assert!((exp.log10_log10_worlds.unwrap() - hand_exp).abs() < 1e-12);
    assert!((exp.log10_log10_worlds.unwrap() - 60.54).abs() < 0.01);

    for model in [GrowthModel::Linear, GrowthModel::Exponential] {
        let value = |t: f64, tp: f64| {
            let r = world_count(&WorldCountConfig {
                universe_age_s: t,
                planck_time_s: tp,
                model,
            })
            .unwrap();
            r.log10_worlds.or(r.log10_log10_worlds).unwrap()
        };
        assert!(value(1e18, 5e-44) > value(1e17, 5e-44));
        assert!(value(1e17, 5e-44) < value(1e17, 5e-45));
    }
}

#[test]
fn walk_oracles_agree() {
    for depth in 0..=12 {
        let a = enumerate_mean_final(depth);
        let b = distribution_mean_final(depth);
        assert!((a - b).abs() < 1e-12);
        let full = evolution_walk(depth, WalkMode::FullBranching, 0, 0).unwrap();
        assert!((full.mean_final_complexity - a).abs() < 1e-12);
        assert_eq!(full.max_complexity, depth as u64);
    }
}

#[test]
fn full_branching_depth_twenty() {
    let r = evolution_walk(20, WalkMode::FullBranching, 0, 0).unwrap();
    assert_eq!(r.max_complexity, 20);
    assert_eq!(r.branch_count, Some(1 << 20));
    assert!((r.mean_final_complexity - distribution_mean_final(20)).abs() < 1e-12);
}

#[test]
fn single_history_matches_enumeration() {
    let oracle = enumerate_mean_final(10);
    let r = evolution_walk(10, WalkMode::SingleHistory, 100_000, 11).unwrap();
    assert!((r.mean_final_complexity - oracle).abs() < 5.0 * r.std_error.unwrap());
    assert!(r.max_complexity <= 10);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                (
                    overlap_statistics(16, 5_000, 1).unwrap(),
                    random_projection_chain(8, 3, 5_000, 2).unwrap(),
                    evolution_walk(12, WalkMode::SingleHistory, 5_000, 3).unwrap(),
                    evolution_walk(16, WalkMode::FullBranching, 0, 0).unwrap(),
                )
            })
    };
    assert_eq!(run(1), run(4));
}
