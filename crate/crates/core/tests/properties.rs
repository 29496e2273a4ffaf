use pitrend::analytics::{
    filter_variance, full_info_finite_t, full_info_mean_rate, full_info_var_rate, optimal_lambda,
    partial_info_finite_t_mean, partial_info_mean_rate, partial_info_sharpe, pif, profit_threshold,
    sq_filter_autocov, AnalyticReport, Variant, PIF_BOUND,
};
use pitrend::analytics::asymptotic::stationary_filter_second_moment;
use pitrend::model::params_from_snr;
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pif_never_exceeds_bound(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-3, 1e3)) {
        prop_assert!(pif(snr, lambda, Variant::Paper) <= PIF_BOUND + 1e-12);
        // a smaller full-information Sharpe makes the corrected factor larger
        prop_assert!(pif(snr, lambda, Variant::Corrected) >= pif(snr, lambda, Variant::Paper) * (1.0 - 1e-12));
    }

    #[test]
    fn pif_bound_attained_on_ridge(snr in log_uniform(1e-3, 1e2)) {
        prop_assert!((pif(snr, optimal_lambda(snr), Variant::Paper) - PIF_BOUND).abs() < 1e-9);
    }

    #[test]
    fn pif_monotone_on_each_side_of_ridge(snr in log_uniform(1e-2, 1e1), a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-6);
        // below the ridge (snr > 1.5 lambda) pif rises with lambda, above it falls
        let ridge = 2.0 * snr / 3.0;
        prop_assert!(pif(snr, ridge * lo, Variant::Paper) < pif(snr, ridge * hi, Variant::Paper));
        prop_assert!(pif(snr, ridge / lo, Variant::Paper) < pif(snr, ridge / hi, Variant::Paper));
        // mirrored in snr at fixed lambda
        let lambda = 1.5 * snr;
        prop_assert!(pif(lambda * 1.5 * lo, lambda, Variant::Paper) < pif(lambda * 1.5 * hi, lambda, Variant::Paper));
    }

    #[test]
    fn partial_rates_monotone(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2), step in 1e-4f64..0.5) {
        let up = snr * (1.0 + step);
        prop_assert!(partial_info_mean_rate(up, lambda) - partial_info_mean_rate(snr, lambda) >= -1e-12);
        prop_assert!(partial_info_sharpe(up, lambda) - partial_info_sharpe(snr, lambda) >= -1e-12);
        let faster = lambda * (1.0 + step);
        prop_assert!(partial_info_mean_rate(snr, faster) - partial_info_mean_rate(snr, lambda) <= 1e-12);
    }

    #[test]
    fn report_invariants(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2), sigma_s in log_uniform(0.05, 5.0)) {
        let r = AnalyticReport::new(lambda, snr, sigma_s).unwrap();
        for (key, value) in r.fields() {
            prop_assert!(value.is_finite() && value >= 0.0, "{key} = {value}");
        }
        prop_assert!(r.partial_sharpe <= r.full_sharpe_paper);
        prop_assert!(r.full_sharpe_corrected <= r.full_sharpe_paper);
        prop_assert!(r.partial_mean_rate <= r.full_mean_rate);
        prop_assert!(r.beta > 1.0);
    }

    #[test]
    fn profit_threshold_below_stationary_level(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2), sigma_s in log_uniform(0.05, 5.0)) {
        let p = params_from_snr(snr, lambda, sigma_s).unwrap();
        prop_assert!(profit_threshold(&p) < stationary_filter_second_moment(&p));
    }

    #[test]
    fn squared_filter_fourth_moment(t in 0.0f64..50.0, snr in log_uniform(1e-2, 1e1), lambda in log_uniform(1e-1, 1e1)) {
        let p = params_from_snr(snr, lambda, 1.0).unwrap();
        let v = filter_variance(t, &p).unwrap();
        let c = sq_filter_autocov(t, t, &p).unwrap();
        prop_assert!((c - 2.0 * v * v).abs() <= 1e-12 * c.max(1e-300));
    }
}

#[test]
fn finite_horizon_rates_approach_limits() {
    for &(snr, lambda) in &[(1.5, 1.0), (0.5, 2.0), (3.0, 0.5)] {
        let p = params_from_snr(snr, lambda, 1.0).unwrap();
        for &t in &[10.0, 50.0, 100.0] {
            let slack = 2.0 / (lambda * t);
            let full = full_info_finite_t(t, &p).unwrap();
            let mean = full_info_mean_rate(snr);
            assert!((full.mean / t - mean).abs() <= slack * mean);
            let var = full_info_var_rate(snr, lambda, Variant::Corrected);
            assert!((full.variance / t - var).abs() <= slack * var);
            let part = partial_info_mean_rate(snr, lambda);
            let got = partial_info_finite_t_mean(t, &p).unwrap() / t;
            assert!((got - part).abs() <= slack * part.max(snr * 0.1), "{snr} {lambda} {t}");
        }
    }
}
