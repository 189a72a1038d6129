use fraclog::special::{gamma, ml, ml_series, recip_gamma, rl_derivative_ml, Regime};
use proptest::prelude::*;
use statrs::function::erf::erfc;

proptest! {
    #[test]
    fn gamma_recurrence(x in -9.9f64..20.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let g = gamma(x).unwrap();
        let g1 = gamma(x + 1.0).unwrap();
        prop_assert!(((g1 - x * g) / g1).abs() < 1e-13);
    }

    #[test]
    fn ml_at_zero_is_one(beta in 0.01f64..1.99) {
        prop_assert_eq!(ml(beta, 0.0, 1e-13).unwrap().value, 1.0);
    }

    #[test]
    fn ml_completely_monotone_bounds(beta in 0.05f64..=1.0, x in 0.0f64..60.0, dx in 0.0f64..5.0) {
        let a = ml(beta, -x, 1e-13).unwrap().value;
        let b = ml(beta, -(x + dx), 1e-13).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-13, "E({beta}, -{x}) = {a} < E(-{}) = {b}", x + dx);
    }

    #[test]
    fn rl_derivative_consistency(beta in 0.2f64..=1.0, mu in -3.0f64..1.0, t in 0.01f64..5.0) {
        let d = rl_derivative_ml(beta, mu, t).unwrap();
        let e = ml(beta, mu * t.powf(beta), 1e-13).unwrap().value;
        let want = t.powf(-beta) * recip_gamma(1.0 - beta);
        prop_assert!((d - mu * e - want).abs() <= 1e-14 * want.abs().max(1.0));
    }
}

#[test]
fn exponential_degeneration() {
    let worst = (0..1000)
        .map(|i| -30.0 + 35.0 * i as f64 / 999.0)
        .map(|z: f64| (ml(1.0, z, 1e-13).unwrap().value - z.exp()).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn half_order_closed_form() {
    // E_{1/2}(−x) = e^{x²} erfc(x)
    for i in 1..=60 {
        let x = 0.1 * i as f64;
        let want = (x * x).exp() * erfc(x);
        let got = ml(0.5, -x, 1e-13).unwrap().value;
        assert!((got - want).abs() < 1e-12 * want.max(1e-3) / 1e-3, "x = {x}: {got} vs {want}");
    }
}

#[test]
fn series_and_asymptotic_agree_on_positive_overlap() {
    // relative accuracy here is limited by rounding in exp(z^{1/β})
    let tol = 1e-11;
    for beta in [0.6, 0.8, 1.0, 1.3] {
        for z in [40.0, 45.0, 50.0] {
            let a = ml(beta, z, tol).unwrap();
            assert_eq!(a.regime, Regime::AsymptoticPositive, "beta {beta}, z {z}");
            let s = ml_series(beta, z, 1e-3 * tol * a.value).unwrap();
            let bound = a.error_bound.max(s.error_bound);
            assert!((a.value - s.value).abs() <= bound, "beta {beta}, z {z}");
        }
    }
}

#[test]
fn overflow_is_reported() {
    assert!(ml(0.6, 60.0, 1e-11).is_err());
    assert!(ml(0.05, 2.1, 1e-11).is_err());
}
