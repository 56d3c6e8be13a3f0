//! Sparse field evaluation against the dense coupling matrices.

use beg_core::dynamics::{
    all_fields, apply_map, check_stability, dense_oracle_fields, local_fields, transfer,
    DenseCouplings,
};
use beg_core::{Entry, ModelParams, PatternSet, TernaryConfig, Variant};
use proptest::prelude::*;

fn instance(n: usize, m: usize, p: f64, seed: u64) -> PatternSet {
    PatternSet::generate(&ModelParams::with_override(n, m, p).unwrap(), seed).unwrap()
}

fn probe_strategy(n: usize) -> impl Strategy<Value = TernaryConfig> {
    proptest::collection::vec(
        prop_oneof![4 => Just(0i8), 1 => Just(1i8), 1 => Just(-1i8)],
        n,
    )
    .prop_map(|d| TernaryConfig::from_dense(&d).unwrap())
}

fn instance_and_probe() -> impl Strategy<Value = (PatternSet, TernaryConfig)> {
    (
        2usize..=50,
        1usize..=20,
        prop_oneof![Just(0.05), Just(0.2)],
        any::<u64>(),
    )
        .prop_flat_map(|(n, m, p, seed)| {
            let ps = instance(n, m, p, seed);
            let stored = ps.clone();
            prop_oneof![
                probe_strategy(n),
                (0..m).prop_map(move |mu| stored.pattern(mu).unwrap()),
            ]
            .prop_map(move |probe| (ps.clone(), probe))
        })
}

fn assert_fields_match(ps: &PatternSet, probe: &TernaryConfig) {
    let sparse = all_fields(ps, probe).unwrap();
    let dense = dense_oracle_fields(ps, probe).unwrap();
    assert_eq!(sparse.len(), ps.n());
    for (i, (s, d)) in sparse.iter().zip(&dense).enumerate() {
        assert_eq!(s.s, d.s, "S at neuron {i}");
        assert!(
            (s.theta - d.theta).abs() <= 1e-9,
            "theta at {i}: {} vs {}",
            s.theta,
            d.theta
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sparse_fields_match_dense((ps, probe) in instance_and_probe()) {
        assert_fields_match(&ps, &probe);
    }

    #[test]
    fn local_matches_batched((ps, probe) in instance_and_probe()) {
        let batched = all_fields(&ps, &probe).unwrap();
        for (i, b) in batched.iter().enumerate() {
            let single = local_fields(&ps, &probe, i).unwrap();
            prop_assert_eq!(single.s, b.s);
            prop_assert!((single.theta - b.theta).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_gamma_equals_original((ps, probe) in instance_and_probe()) {
        prop_assert_eq!(
            apply_map(&ps, &probe, Variant::Thresholded, 0.0).unwrap(),
            apply_map(&ps, &probe, Variant::Original, 0.0).unwrap()
        );
    }

    #[test]
    fn transfer_monotone_in_theta(s in -50i64..50, theta in -60.0f64..60.0, bump in 0.0f64..30.0, tau in 0.0f64..40.0) {
        let before = transfer(s, theta, tau);
        let after = transfer(s, theta + bump, tau);
        if s != 0 && before != 0 {
            prop_assert_eq!(after, before);
        }
        prop_assert!(before == 0 || before == s.signum() as i8);
    }

    #[test]
    fn single_pattern_criterion(n in 3usize..200, gamma in 0.0f64..4.0, seed in any::<u64>()) {
        let p = 0.1;
        let ps = instance(n, 1, p, seed);
        let k = ps.activity_of(0).unwrap();
        let r = check_stability(&ps, 0, Variant::Thresholded, gamma).unwrap();
        let tau = gamma * (n as f64).ln();
        // Skip realisations sitting within rounding distance of the threshold.
        prop_assume!(k == 0 || (2.0 * (k as f64 - 1.0) - tau).abs() > 1e-9);
        prop_assert_eq!(r.stable, k == 0 || 2.0 * (k as f64 - 1.0) >= tau);
        prop_assert!(r.erased + r.sign_flipped <= r.k);
        prop_assert!(r.zero_to_nonzero <= n - r.k);
    }

    #[test]
    fn stability_independent_of_evaluation_order((ps, _probe) in instance_and_probe(), gamma in 0.0f64..2.5) {
        let xi = ps.pattern(0).unwrap();
        let tau = gamma * (ps.n() as f64).ln();
        // Evaluate neurons back to front, one at a time, then compare.
        let mut out = vec![0i8; ps.n()];
        for i in (0..ps.n()).rev() {
            let f = local_fields(&ps, &xi, i).unwrap();
            out[i] = transfer(f.s, f.theta, tau);
        }
        let mapped = apply_map(&ps, &xi, Variant::Thresholded, gamma).unwrap();
        prop_assert_eq!(mapped.to_dense(), out.clone());
        let r = check_stability(&ps, 0, Variant::Thresholded, gamma).unwrap();
        prop_assert_eq!(r.stable, out == xi.to_dense());
    }
}

#[test]
fn hundred_fixed_instances() {
    // Deterministic sweep for the two activity overrides.
    let mut count = 0;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize * 7) % 49;
        let m = 1 + (seed as usize * 3) % 20;
        let p = if seed % 2 == 0 { 0.05 } else { 0.2 };
        let ps = instance(n, m, p, seed);
        for mu in 0..m {
            assert_fields_match(&ps, &ps.pattern(mu).unwrap());
        }
        assert_fields_match(&ps, &TernaryConfig::zeros(n));
        count += 1;
    }
    assert_eq!(count, 100);
}

#[test]
fn batched_agrees_with_single_on_random_neurons() {
    let ps = instance(50, 10, 0.2, 77);
    let probe = TernaryConfig::from_entries(
        50,
        vec![
            Entry::new(3, 1),
            Entry::new(10, -1),
            Entry::new(11, 1),
            Entry::new(42, -1),
        ],
    )
    .unwrap();
    let batched = all_fields(&ps, &probe).unwrap();
    for i in (0..50).step_by(50 / 20 + 1).chain([0, 49]) {
        let single = local_fields(&ps, &probe, i).unwrap();
        assert_eq!(single.s, batched[i].s);
        assert!((single.theta - batched[i].theta).abs() < 1e-12);
    }
}

#[test]
fn couplings_symmetric() {
    let ps = instance(30, 12, 0.2, 5);
    let dense = DenseCouplings::build(&ps).unwrap();
    for a in 0..30 {
        for b in 0..30 {
            assert_eq!(dense.j(a, b), dense.j(b, a));
            assert_eq!(dense.k(a, b), dense.k(b, a));
        }
    }
}

#[test]
fn single_pattern_self_support() {
    // With only the probe stored, every active neuron sees |S| + θ = 2(k − 1).
    for seed in 0..20 {
        let ps = instance(40, 1, 0.2, seed);
        let xi = ps.pattern(0).unwrap();
        let k = xi.support_size() as f64;
        let fields = all_fields(&ps, &xi).unwrap();
        for e in xi.entries() {
            let f = fields[e.index as usize];
            assert_eq!(f.s, (k as i64 - 1) * i64::from(e.spin));
            assert!(((f.s.abs() as f64 + f.theta) - 2.0 * (k - 1.0)).abs() < 1e-12);
        }
    }
}
