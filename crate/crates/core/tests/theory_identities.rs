use beg_core::theory::{f_exponent, g, zero_error_exponent, zero_error_h, zero_error_tstar};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn g_vanishes_at_one(gamma in 0.01f64..10.0) {
        prop_assert!(g(gamma, 1.0).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn rescaled_f_equals_g(alpha in 0.01f64..5.0, gamma in 0.01f64..2.0) {
        let x = 1.0 + gamma / alpha;
        let lhs = 2.0 / alpha * f_exponent(alpha, 1.0, x);
        let rhs = g(gamma, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn exponent_is_one_plus_minimised_h(alpha in 0.01f64..5.0, gamma in 0.01f64..2.0, rho in 0.5f64..1.5) {
        let t = zero_error_tstar(alpha, gamma, rho);
        let via_h = 1.0 + zero_error_h(t, alpha, gamma, rho);
        let direct = zero_error_exponent(alpha, gamma, rho).unwrap();
        prop_assert!((via_h - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }
}
