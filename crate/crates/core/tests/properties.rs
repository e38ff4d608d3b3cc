use sepineq::catalog::{self, haar_unitary};
use sepineq::inequality::violation_value;
use sepineq::measurement::estimate_violation;
use sepineq::optimizer::{maximize_violation, OptimizerConfig};
use sepineq::rng;

#[test]
fn optimum_is_invariant_under_local_unitaries() {
    let cfg = OptimizerConfig { restarts: 8, ..OptimizerConfig::with_seed(2) };
    let mut r = rng::seeded(31);
    for (d, seed) in [(2usize, 1u64), (3, 2), (4, 3)] {
        let rho = catalog::random_density(d, 2, seed).unwrap();
        let base = maximize_violation(&rho, &cfg).unwrap().f;
        for _ in 0..2 {
            let moved = rho.local_unitary(&haar_unitary(&mut r, 2), &haar_unitary(&mut r, d)).unwrap();
            let f = maximize_violation(&moved, &cfg).unwrap().f;
            assert!((f - base).abs() < 2e-3, "d = {d}: {base} vs {f}");
        }
    }
}

#[test]
fn optimum_meets_seeded_bound_and_is_clamped() {
    let cfg = OptimizerConfig { restarts: 4, ..OptimizerConfig::with_seed(5) };
    for seed in 0..12u64 {
        let d = 2 + (seed as usize % 4);
        let rho = catalog::random_density(d, 1 + (seed as usize % (2 * d)), seed).unwrap();
        let bound = (-4.0 * d as f64 * rho.min_pt_eigenvalue()).max(0.0);
        let f = maximize_violation(&rho, &cfg).unwrap().f;
        assert!(f >= bound - 1e-6 && f >= 0.0, "seed {seed}: {f} < {bound}");
    }
}

#[test]
fn estimator_coverage() {
    let rho = catalog::isotropic23(0.75).unwrap();
    let pair = catalog::isotropic_pair();
    let exact = violation_value(&rho, &pair).unwrap().f;
    let hits = (0..200).filter(|&s| {
        let e = estimate_violation(&rho, &pair, 100_000, s).unwrap();
        (e.f.value - exact).abs() <= 2.0 * e.f.stderr
    });
    assert!(hits.count() >= 180);
}

#[test]
fn estimator_coverage_on_a_generic_state() {
    let rho = catalog::random_density(3, 2, 77).unwrap();
    let pair = sepineq::inequality::npt_seeded_violation(&rho).unwrap().pair;
    let exact = violation_value(&rho, &pair).unwrap().f;
    let hits = (0..200).filter(|&s| {
        let e = estimate_violation(&rho, &pair, 100_000, 10_000 + s).unwrap();
        (e.f.value - exact).abs() <= 2.0 * e.f.stderr
    });
    assert!(hits.count() >= 180);
}

#[test]
fn stderr_halves_when_shots_quadruple() {
    let rho = catalog::random_density(4, 3, 12).unwrap();
    let pair = sepineq::inequality::npt_seeded_violation(&rho).unwrap().pair;
    let mean = |shots: u64| (0..100).map(|s| estimate_violation(&rho, &pair, shots, s).unwrap().f.stderr).sum::<f64>() / 100.0;
    for n in [10_000u64, 100_000] {
        let ratio = mean(n) / mean(4 * n);
        assert!((ratio / 2.0 - 1.0).abs() <= 0.2, "{n}: {ratio}");
    }
}
