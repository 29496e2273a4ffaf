//! Long-horizon rates and Sharpe ratios of the two log-optimal strategies.
//!
//! Inputs are the sweep coordinates `(snr, lambda)`; both must be strictly
//! positive. Functions suffixed `_beta` are the same quantities written in
//! terms of the filter parameter, taking `beta - 1` directly so that weak
//! signals keep full relative precision.

use super::Variant;
use crate::model::{sqrt1p_m1, ModelParams};

/// Upper bound of the paper-variant partial information factor, `2 / 3^{3/2}`.
pub const PIF_BOUND: f64 = 0.384_900_179_459_750_5;

/// `beta - 1` as a function of the sweep coordinates.
pub fn beta_minus_one(snr: f64, lambda: f64) -> f64 {
    sqrt1p_m1(2.0 * snr / lambda)
}

pub fn full_info_mean_rate(snr: f64) -> f64 {
    snr / 2.0
}

/// Variance rate of the full-information log return.
///
/// `Paper` is the published limit `snr`; `Corrected` adds the contribution
/// `snr^2 / (2 lambda)` of the integrated squared trend.
pub fn full_info_var_rate(snr: f64, lambda: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Paper => snr,
        Variant::Corrected => snr + snr * snr / (2.0 * lambda),
    }
}

pub fn full_info_sharpe(snr: f64, lambda: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Paper => snr.sqrt() / 2.0,
        Variant::Corrected => full_info_mean_rate(snr) / full_info_var_rate(snr, lambda, variant).sqrt(),
    }
}

/// `(snr + lambda - sqrt(lambda (lambda + 2 snr))) / 2`, rationalized.
pub fn partial_info_mean_rate(snr: f64, lambda: f64) -> f64 {
    let root = (lambda * (lambda + 2.0 * snr)).sqrt();
    0.5 * snr * snr / (snr + lambda + root)
}

/// `lambda (beta - 1)^2 / 4`.
pub fn partial_info_mean_rate_beta(lambda: f64, beta_minus_one: f64) -> f64 {
    lambda * beta_minus_one * beta_minus_one / 4.0
}

pub fn partial_info_var_rate(snr: f64, lambda: f64) -> f64 {
    snr * snr / (2.0 * lambda)
}

/// `lambda (beta^2 - 1)^2 / 8`.
pub fn partial_info_var_rate_beta(lambda: f64, beta_minus_one: f64) -> f64 {
    let b2m1 = beta_minus_one * (beta_minus_one + 2.0);
    lambda * b2m1 * b2m1 / 8.0
}

/// `(lambda/2)^{3/2} (sqrt(1 + 2 snr/lambda) - 1)^2 / snr`.
pub fn partial_info_sharpe(snr: f64, lambda: f64) -> f64 {
    let b = beta_minus_one(snr, lambda);
    (lambda / 2.0).powf(1.5) * b * b / snr
}

/// `sqrt(lambda/2) (beta - 1) / (beta + 1)`.
pub fn partial_info_sharpe_beta(lambda: f64, beta_minus_one: f64) -> f64 {
    (lambda / 2.0).sqrt() * beta_minus_one / (beta_minus_one + 2.0)
}

/// Partial information factor: partial over full asymptotic Sharpe ratio.
pub fn pif(snr: f64, lambda: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Paper => {
            let b = beta_minus_one(snr, lambda);
            (lambda / snr).powf(1.5) * b * b / std::f64::consts::SQRT_2
        }
        Variant::Corrected => partial_info_sharpe(snr, lambda) / full_info_sharpe(snr, lambda, variant),
    }
}

/// Mean-reversion speed maximizing the partial-information Sharpe ratio.
pub fn optimal_lambda(snr: f64) -> f64 {
    2.0 * snr / 3.0
}

/// Partial-information Sharpe ratio at [`optimal_lambda`], `sqrt(snr) / 3^{3/2}`.
pub fn max_partial_sharpe(snr: f64) -> f64 {
    snr.sqrt() / 27f64.sqrt()
}

/// Level the time-averaged squared filter must exceed for the Trading Impact
/// to be positive in the long run:
/// `lambda sigma_s^2 (beta - 1) / (2 beta / (beta - 1) - 1)`.
pub fn profit_threshold(params: &ModelParams) -> f64 {
    let b = params.beta_minus_one();
    // the denominator simplifies to (beta + 1) / (beta - 1)
    params.lambda() * params.sigma_s().powi(2) * b * b / (b + 2.0)
}

/// Stationary second moment of the filter, `lambda sigma_s^2 (beta - 1)^2 / 2`.
pub fn stationary_filter_second_moment(params: &ModelParams) -> f64 {
    let b = params.beta_minus_one();
    params.lambda() * params.sigma_s().powi(2) * b * b / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params_from_snr;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn bound_constant() {
        assert!(rel(PIF_BOUND, 2.0 / 3f64.powf(1.5)) < 1e-15);
    }

    #[test]
    fn full_info_examples() {
        assert_eq!(full_info_mean_rate(1.5), 0.75);
        assert_eq!(full_info_mean_rate(1.0), 0.5);
        assert_eq!(full_info_var_rate(1.5, 1.0, Variant::Paper), 1.5);
        assert_eq!(full_info_var_rate(1.5, 1.0, Variant::Corrected), 2.625);
        assert_eq!(full_info_sharpe(1.0, 3.0, Variant::Paper), 0.5);
        assert_eq!(full_info_sharpe(4.0, 3.0, Variant::Paper), 1.0);
        assert!(rel(full_info_sharpe(1.5, 1.0, Variant::Corrected), 0.75 / 2.625f64.sqrt()) < 1e-15);
        assert!((full_info_sharpe(1.5, 1.0, Variant::Corrected) - 0.462_910).abs() < 1e-6);
        assert!(full_info_mean_rate(1e-300) < 1e-299);
    }

    #[test]
    fn partial_info_examples() {
        assert!(rel(partial_info_mean_rate(1.5, 1.0), 0.25) < 1e-15);
        assert!(rel(partial_info_mean_rate_beta(1.0, 1.0), 0.25) < 1e-15);
        assert!(partial_info_mean_rate(1e-12, 1.0) < 1e-20);
        assert!(rel(partial_info_var_rate(1.5, 1.0), 1.125) < 1e-15);
        assert!(rel(partial_info_var_rate_beta(1.0, 1.0), 1.125) < 1e-15);
        assert!(rel(partial_info_var_rate(1.0, 2.0), 0.25) < 1e-15);
        let sr = partial_info_sharpe(1.5, 1.0);
        assert!(rel(sr, 0.5f64.sqrt() / 3.0) < 1e-14);
        assert!(rel(sr, 1.5f64.sqrt() / 3f64.powf(1.5)) < 1e-14);
        assert!((sr - 0.235_702).abs() < 1e-6);
        assert!(partial_info_sharpe(1e-12, 1.0) < 1e-12);
    }

    #[test]
    fn pif_examples() {
        let p = pif(1.5, 1.0, Variant::Paper);
        assert!((p - 0.384_900).abs() < 1e-6);
        assert!(rel(p, PIF_BOUND) < 1e-14);
        let ratio = partial_info_sharpe(1.5, 1.0) / full_info_sharpe(1.5, 1.0, Variant::Paper);
        assert!(rel(p, ratio) < 1e-12);
        // pif ~ sqrt(snr / (2 lambda)) as lambda grows
        assert!(rel(pif(1.5, 1e12, Variant::Paper), (1.5f64 / 2e12).sqrt()) < 1e-5);
        assert!(pif(1.5, 1e8, Variant::Paper) < pif(1.5, 1e4, Variant::Paper));
        let corrected = pif(1.5, 1.0, Variant::Corrected);
        assert!(rel(corrected, partial_info_sharpe(1.5, 1.0) / full_info_sharpe(1.5, 1.0, Variant::Corrected)) < 1e-15);
        assert!(corrected > p);
    }

    #[test]
    fn optimal_lambda_examples() {
        assert_eq!(optimal_lambda(1.5), 1.0);
        assert_eq!(optimal_lambda(3.0), 2.0);
        assert!(rel(partial_info_sharpe(3.0, 2.0), 1.0 / 3.0) < 1e-14);
        assert!(rel(max_partial_sharpe(3.0), 1.0 / 3.0) < 1e-15);
    }

    #[test]
    fn optimal_lambda_matches_grid_argmax() {
        for &snr in &[0.05, 0.3, 1.5, 4.0, 20.0] {
            let step = optimal_lambda(snr) / 500.0;
            let (best, _) = (1..=2000)
                .map(|k| k as f64 * step)
                .map(|l| (l, partial_info_sharpe(snr, l)))
                .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
            assert!((best - optimal_lambda(snr)).abs() <= step, "snr={snr} best={best}");
        }
    }

    #[test]
    fn sharpe_unimodal_in_lambda() {
        let snr = 1.2;
        let grid: Vec<f64> = (1..=400).map(|k| k as f64 * 0.01).collect();
        let signs: Vec<bool> = grid
            .windows(2)
            .map(|w| partial_info_sharpe(snr, w[1]) > partial_info_sharpe(snr, w[0]))
            .collect();
        let changes: Vec<usize> = signs.windows(2).enumerate().filter(|(_, w)| w[0] != w[1]).map(|(i, _)| i).collect();
        assert_eq!(changes.len(), 1);
        let at = grid[changes[0] + 1];
        assert!((at - optimal_lambda(snr)).abs() <= 0.01 + 1e-12);
    }

    #[test]
    fn profit_threshold_examples() {
        let p = params_from_snr(1.5, 1.0, 1.0).unwrap();
        assert!(rel(profit_threshold(&p), 1.0 / 3.0) < 1e-14);
        assert!(rel(stationary_filter_second_moment(&p), 0.5) < 1e-14);
        let weak = params_from_snr(1e-10, 1.0, 1.0).unwrap();
        assert!(profit_threshold(&weak) > 0.0 && profit_threshold(&weak) < 1e-19);
    }

    fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        (lo.ln()..hi.ln()).prop_map(f64::exp)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn dual_forms_agree(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2)) {
            let p = params_from_snr(snr, lambda, 1.0).unwrap();
            let b = p.beta_minus_one();
            prop_assert!(rel(partial_info_mean_rate(snr, lambda), partial_info_mean_rate_beta(lambda, b)) < 1e-12);
            prop_assert!(rel(partial_info_var_rate(snr, lambda), partial_info_var_rate_beta(lambda, b)) < 1e-12);
            prop_assert!(rel(partial_info_sharpe(snr, lambda), partial_info_sharpe_beta(lambda, b)) < 1e-12);
            let ratio = partial_info_mean_rate(snr, lambda) / partial_info_var_rate(snr, lambda).sqrt();
            prop_assert!(rel(partial_info_sharpe(snr, lambda), ratio) < 1e-12);
        }

        #[test]
        fn information_ordering(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2)) {
            prop_assert!(partial_info_mean_rate(snr, lambda) <= full_info_mean_rate(snr));
            prop_assert!(partial_info_sharpe(snr, lambda) <= full_info_sharpe(snr, lambda, Variant::Paper));
            prop_assert!(pif(snr, lambda, Variant::Paper) <= PIF_BOUND + 1e-12);
            prop_assert!(full_info_sharpe(snr, lambda, Variant::Corrected) <= full_info_sharpe(snr, lambda, Variant::Paper));
            let p = params_from_snr(snr, lambda, 1.0).unwrap();
            prop_assert!(stationary_filter_second_moment(&p) > profit_threshold(&p));
        }

        #[test]
        fn var_rate_homogeneous(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2), c in 0.1f64..10.0) {
            prop_assert!(rel(partial_info_var_rate(c * snr, c * lambda), c * partial_info_var_rate(snr, lambda)) < 1e-12);
        }

        #[test]
        fn pif_definition(snr in log_uniform(1e-3, 1e2), lambda in log_uniform(1e-2, 3e2)) {
            let ratio = partial_info_sharpe(snr, lambda) / full_info_sharpe(snr, lambda, Variant::Paper);
            prop_assert!(rel(pif(snr, lambda, Variant::Paper), ratio) < 1e-12);
        }
    }
}
