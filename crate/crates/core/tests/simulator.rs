//! Monte Carlo checks of the engine against the closed forms.

use pitrend::analytics::{filter_variance, partial_info_finite_t_mean, profit_threshold};
use pitrend::model::{params_from_snr, ModelParams};
use pitrend::sim::{
    filter_law_check, mc_stats, sample_moments, simulate_ensemble, InitialTrend, SimConfig, Strategy,
};

fn canonical() -> ModelParams {
    params_from_snr(1.5, 1.0, 1.0).unwrap()
}

#[test]
fn filter_law_at_five_years() {
    let cfg = SimConfig::new(canonical(), 5.0, 100_000, 17).with_dt(1e-3);
    let r = filter_law_check(&cfg).unwrap();
    assert!((r.variance.expected - 0.5 * (1.0 - (-10.0f64).exp())).abs() < 1e-12);
    assert!(r.variance.within(3.0), "{:?}", r.variance);
    assert!(r.lag_correlation.within(3.0), "{:?}", r.lag_correlation);
    assert!(r.mean.within(3.0), "{:?}", r.mean);
}

#[test]
fn partial_mean_at_one_year() {
    let p = canonical();
    let cfg = SimConfig::new(p, 1.0, 100_000, 23)
        .with_dt(1e-3)
        .with_initial_trend(InitialTrend::SteadyStatePrior);
    let ens = simulate_ensemble(&cfg).unwrap();
    let xs: Vec<f64> = ens.summaries.iter().map(|s| s.terminal().log_wealth_partial).collect();
    let m = sample_moments(&xs).unwrap();
    let expected = partial_info_finite_t_mean(1.0, &p).unwrap();
    assert!((expected - 0.14191691).abs() < 1e-8);
    assert!(((m.mean - expected) / m.mean_se).abs() < 3.0, "{} vs {expected}", m.mean);
}

#[test]
fn fixed_start_differs_from_prior_start() {
    // without the prior the filter is not the conditional mean and the
    // one-year partial return is much lower than the closed form
    let cfg = SimConfig::new(canonical(), 1.0, 50_000, 5).with_dt(1e-3);
    let ens = simulate_ensemble(&cfg).unwrap();
    let xs: Vec<f64> = ens.summaries.iter().map(|s| s.terminal().log_wealth_partial).collect();
    let m = sample_moments(&xs).unwrap();
    assert!(((m.mean - 0.0481) / m.mean_se).abs() < 4.0, "{}", m.mean);
}

#[test]
fn halving_dt_halves_the_bias() {
    let p = canonical();
    let exact = partial_info_finite_t_mean(1.0, &p).unwrap();
    let gap = |dt: f64, seed: u64| {
        let cfg = SimConfig::new(p, 1.0, 200_000, seed)
            .with_dt(dt)
            .with_initial_trend(InitialTrend::SteadyStatePrior);
        let ens = simulate_ensemble(&cfg).unwrap();
        let xs: Vec<f64> = ens.summaries.iter().map(|s| s.terminal().log_wealth_partial).collect();
        (sample_moments(&xs).unwrap().mean - exact).abs()
    };
    let ratios: Vec<f64> = (0..5).map(|seed| gap(1.0 / 8.0, seed) / gap(1.0 / 16.0, 100 + seed)).collect();
    let mean = ratios.iter().sum::<f64>() / 5.0;
    assert!(mean >= 1.7, "{ratios:?}");
}

#[test]
fn trading_impact_condition_holds_long_run() {
    let p = canonical();
    let horizon = 100.0;
    let cfg = SimConfig::new(p, horizon, 2_000, 31);
    let ens = simulate_ensemble(&cfg).unwrap();
    let threshold = profit_threshold(&p);
    let above = ens
        .summaries
        .iter()
        .filter(|s| s.terminal().mu_hat_sq_integral / horizon > threshold)
        .count();
    assert!(above as f64 >= 0.99 * 2_000.0, "{above}");
}

#[test]
fn statistics_independent_of_thread_count() {
    let cfg = SimConfig::new(canonical(), 10.0, 4_000, 77);
    let stats = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let ens = simulate_ensemble(&cfg).unwrap();
                (mc_stats(&ens, Strategy::Full).unwrap(), mc_stats(&ens, Strategy::Partial).unwrap())
            })
    };
    let one = stats(1);
    for threads in [2, 4, 7] {
        let other = stats(threads);
        assert_eq!(one.0.mean_rate.to_bits(), other.0.mean_rate.to_bits());
        assert_eq!(one.1.var_rate.to_bits(), other.1.var_rate.to_bits());
        assert_eq!(one, other);
    }
}

#[test]
fn filter_variance_grows_from_zero() {
    let p = canonical();
    let cfg = SimConfig::new(p, 2.0, 50_000, 3)
        .with_dt(1e-3)
        .with_checkpoints(&[0.25, 0.5, 1.0])
        .with_initial_trend(InitialTrend::SteadyStatePrior);
    let ens = simulate_ensemble(&cfg).unwrap();
    for (i, t) in [0.25, 0.5, 1.0, 2.0].into_iter().enumerate() {
        let xs: Vec<f64> = ens.summaries.iter().map(|s| s.snapshots[i].mu_hat).collect();
        let m = sample_moments(&xs).unwrap();
        let v = filter_variance(t, &p).unwrap();
        assert!(((m.variance - v) / m.variance_se).abs() < 4.0, "t = {t}: {} vs {v}", m.variance);
    }
}

#[test]
fn fixed_start_filter_lags_its_law_early_on() {
    let p = canonical();
    let cfg = SimConfig::new(p, 0.25, 50_000, 3).with_dt(1e-3);
    let ens = simulate_ensemble(&cfg).unwrap();
    let xs: Vec<f64> = ens.summaries.iter().map(|s| s.terminal().mu_hat).collect();
    let m = sample_moments(&xs).unwrap();
    assert!(m.variance < filter_variance(0.25, &p).unwrap() - 5.0 * m.variance_se);
}
