//! Property tests for the special functions: recurrence identities,
//! derivative consistency, and monotonicity.

use betafit_core::specfun::{digamma, ln_gamma, trigamma};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn digamma_recurrence(x in 1e-2f64..100.0) {
        // ψ(x+1) − ψ(x) = 1/x
        let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
        prop_assert!((lhs - 1.0 / x).abs() < 1e-11);
    }

    #[test]
    fn trigamma_recurrence(x in 1e-2f64..100.0) {
        // ψ₁(x+1) − ψ₁(x) = −1/x²
        let lhs = trigamma(x + 1.0).unwrap() - trigamma(x).unwrap();
        prop_assert!((lhs + 1.0 / (x * x)).abs() < 1e-10);
    }

    #[test]
    fn ln_gamma_recurrence(x in 1e-2f64..100.0) {
        // ln Γ(x+1) − ln Γ(x) = ln x
        let lhs = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap();
        prop_assert!((lhs - x.ln()).abs() < 1e-11 * x.ln().abs().max(1.0));
    }

    #[test]
    fn trigamma_is_digamma_derivative(x in 0.1f64..50.0) {
        let h = 1e-5;
        let fd = (digamma(x + h).unwrap() - digamma(x - h).unwrap()) / (2.0 * h);
        prop_assert!((fd - trigamma(x).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn digamma_is_ln_gamma_derivative(x in 0.1f64..50.0) {
        let h = 1e-5;
        let fd = (ln_gamma(x + h).unwrap() - ln_gamma(x - h).unwrap()) / (2.0 * h);
        prop_assert!((fd - digamma(x).unwrap()).abs() < 1e-5);
    }
}

#[test]
fn trigamma_strictly_decreasing() {
    let grid: Vec<f64> = (1..2000).map(|i| i as f64 * 0.05).collect();
    for w in grid.windows(2) {
        assert!(
            trigamma(w[1]).unwrap() < trigamma(w[0]).unwrap(),
            "trigamma not decreasing between {} and {}",
            w[0],
            w[1]
        );
    }
}

#[test]
fn large_argument_accuracy() {
    // Reference values from a 40-digit oracle.
    let cases = [
        (1e3f64, 5905.2204232091812),
        (1e6f64, 12815504.569147612),
    ];
    for (x, expect) in cases {
        let got = ln_gamma(x).unwrap();
        assert!(
            (got - expect).abs() / expect.abs() < 1e-14,
            "ln_gamma({x}) = {got}, expected {expect}"
        );
    }
    // ψ and ψ₁ at extreme arguments, same oracle.
    assert!((digamma(1e6).unwrap() - 13.815510057964191).abs() < 1e-12);
    assert!((trigamma(1e6).unwrap() - 1.0000005000001667e-6).abs() < 1e-17);
    assert!((digamma(1e-3).unwrap() - (-1000.5755719318103)).abs() < 1e-9);
    assert!((trigamma(1e-3).unwrap() - 1000001.6425331959).abs() < 1e-4);
}
