use fraclog::logistic::west_function;
use fraclog::mfle::{
    boundary_term, double_integral_term, estimate_order, fit_limit, log_spaced, residual,
    Convention, OrderMethod,
};
use fraclog::stochastic::{mc_double_integral, RngStream};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conventions_differ_by_boundary_term(
        beta in 0.1f64..1.0,
        u0 in 0.55f64..3.0,
        t in 0.05f64..20.0,
    ) {
        let rl = residual(u0, beta, &[t], Convention::RiemannLiouvilleSeries, TOL).unwrap();
        let c = residual(u0, beta, &[t], Convention::CaputoSeries, TOL).unwrap();
        let b = boundary_term(u0, beta, t);
        prop_assert!((rl.residual[0] - c.residual[0] - b).abs() <= 4.0 * f64::EPSILON * b.max(1.0));
    }
}

#[test]
fn rl_residual_within_truncation_budget() {
    let grid: Vec<f64> = log_spaced(0.25, 10.0, 24);
    for beta in [0.3, 0.5, 0.7, 0.9] {
        for u0 in [0.6, 0.75, 0.9, 1.5] {
            let r = residual(u0, beta, &grid, Convention::RiemannLiouvilleSeries, TOL).unwrap();
            assert!(r.max_abs_residual <= 10.0 * TOL, "beta {beta}, u0 {u0}: {:e}", r.max_abs_residual);
        }
    }
}

#[test]
fn l1_residual_converges_to_series() {
    let grid = [0.5, 1.0, 2.0];
    let beta = 0.5;
    let series = residual(0.75, beta, &grid, Convention::RiemannLiouvilleSeries, TOL).unwrap();
    let errs: Vec<f64> = [7, 8, 9]
        .iter()
        .map(|&k| {
            let conv = Convention::NumericalL1 { h: 2f64.powi(-k) };
            let r = residual(0.75, beta, &grid, conv, TOL).unwrap();
            r.residual
                .iter()
                .zip(&series.residual)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for e in errs.windows(2) {
        let order = (e[0] / e[1]).log2();
        assert!((order - (2.0 - beta)).abs() < 0.15, "{errs:?}");
    }
}

#[test]
fn limit_formula_recovers_order() {
    for beta in [0.5, 0.7, 0.9] {
        let samples: Vec<(f64, f64)> = log_spaced(20.0, 200.0, 64)
            .into_iter()
            .map(|t| (t, west_function(0.75, beta, t, TOL).unwrap().0))
            .collect();
        let e = estimate_order(&samples, 0.75, OrderMethod::LimitFormula).unwrap();
        assert!((e.beta_hat - beta).abs() <= 0.03, "beta {beta}: {}", e.beta_hat);
        let (w_inf, _) = fit_limit(&samples, e.beta_hat).unwrap();
        assert!((w_inf - 1.0).abs() <= 1e-3);
    }
}

#[test]
fn double_integral_matches_monte_carlo() {
    let exact = double_integral_term(0.75, 0.7, 1.0, TOL).unwrap();
    let mc = mc_double_integral(0.75, 0.7, 1.0, 1_000_000, RngStream::new(11, 0)).unwrap();
    assert!(mc.within_sigma(exact, 3.0), "{exact} vs {mc:?}");
}
