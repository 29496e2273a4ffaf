//! Compares the simulated filter with the Ornstein-Uhlenbeck law it should
//! follow: mean `filter_mean(t)`, variance `V(t) = filter_variance(t)` and
//! one-step autocorrelation `exp(-lambda dt) sqrt(V(t - dt) / V(t))`. From a
//! stationary start `V` is constant. From a fixed start the law only holds
//! once the start-up transient `exp(-lambda beta t)` has decayed.

use super::engine::{simulate_ensemble, Ensemble, InitialTrend, SimConfig};
use super::stats::{sample_covariance, sample_moments};
use super::SimError;
use crate::analytics::asymptotic::stationary_filter_second_moment;
use crate::analytics::{filter_mean, filter_variance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZScore {
    pub expected: f64,
    pub estimate: f64,
    pub se: f64,
    pub z: f64,
}

impl ZScore {
    pub fn new(expected: f64, estimate: f64, se: f64) -> Self {
        ZScore {
            expected,
            estimate,
            se,
            z: (estimate - expected) / se,
        }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.z.abs() <= sigmas
    }
}

/// Statistics of `muhat` at the horizon of the configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterLawReport {
    pub time: f64,
    pub n_paths: usize,
    pub mean: ZScore,
    pub variance: ZScore,
    pub lag_correlation: ZScore,
}

impl FilterLawReport {
    pub fn within(&self, sigmas: f64) -> bool {
        self.mean.within(sigmas) && self.variance.within(sigmas) && self.lag_correlation.within(sigmas)
    }
}

/// Runs `config` (with an extra observation one step before the horizon)
/// and scores the filter against its analytic law at the horizon.
pub fn filter_law_check(config: &SimConfig) -> Result<FilterLawReport, SimError> {
    let before = config.horizon - config.dt;
    if !(before > 0.0) {
        return Err(SimError::InvalidConfig("the horizon must span at least two steps".into()));
    }
    let mut cfg = config.clone();
    cfg.record_paths = false;
    cfg.checkpoints = vec![before];
    let ens = simulate_ensemble(&cfg)?;
    filter_law_report(&ens, cfg.horizon)
}

/// Scores an existing ensemble at `time`; it needs snapshots at `time` and
/// one step earlier.
pub fn filter_law_report(ens: &Ensemble, time: f64) -> Result<FilterLawReport, SimError> {
    let cfg = &ens.config;
    let dt = ens.schedule.dt;
    let before = time - dt;
    let missing = |t: f64| SimError::InvalidConfig(format!("no snapshot at t = {t}"));
    let i_prev = ens.snapshot_index(before).ok_or_else(|| missing(before))?;
    let i_end = ens.snapshot_index(time).ok_or_else(|| missing(time))?;
    if !(before > 0.0) {
        return Err(missing(before));
    }
    let prev: Vec<f64> = ens.snapshots_at(i_prev).map(|s| s.mu_hat).collect();
    let end: Vec<f64> = ens.snapshots_at(i_end).map(|s| s.mu_hat).collect();

    let p = &cfg.params;
    let (expected_mean, v_end, v_prev) = match cfg.initial_trend {
        InitialTrend::Fixed => (filter_mean(time, p)?, filter_variance(time, p)?, filter_variance(before, p)?),
        // the expected start equals the filter start
        InitialTrend::SteadyStatePrior => {
            let centred = p.with_initial(p.muhat0(), p.muhat0())?;
            (filter_mean(time, &centred)?, filter_variance(time, p)?, filter_variance(before, p)?)
        }
        InitialTrend::Stationary => {
            let v = stationary_filter_second_moment(p);
            (0.0, v, v)
        }
    };
    let m = sample_moments(&end)?;
    let m_prev = sample_moments(&prev)?;

    let cov = sample_covariance(&prev, &end)?;
    let corr = cov.covariance / (m.variance * m_prev.variance).sqrt();
    let corr_expected = (-p.lambda() * dt).exp() * (v_prev / v_end).sqrt();
    let n = m.n as f64;

    Ok(FilterLawReport {
        time,
        n_paths: m.n,
        mean: ZScore::new(expected_mean, m.mean, m.mean_se),
        variance: ZScore::new(v_end, m.variance, m.variance_se),
        lag_correlation: ZScore::new(corr_expected, corr, (1.0 - corr * corr) / n.sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params_from_snr;

    #[test]
    fn rejects_one_step_horizon() {
        let p = params_from_snr(1.5, 1.0, 1.0).unwrap();
        let cfg = SimConfig::new(p, 0.01, 100, 0).with_dt(0.01);
        assert!(matches!(filter_law_check(&cfg), Err(SimError::InvalidConfig(_))));
    }

    #[test]
    fn small_run_is_consistent() {
        let p = params_from_snr(1.5, 1.0, 1.0).unwrap();
        let cfg = SimConfig::new(p, 2.0, 20_000, 8).with_dt(1e-3);
        let r = filter_law_check(&cfg).unwrap();
        assert_eq!(r.n_paths, 20_000);
        assert!(r.within(4.0), "{r:?}");
        let r = filter_law_check(&cfg.with_initial_trend(InitialTrend::Stationary)).unwrap();
        assert!(r.within(4.0), "{r:?}");
    }
}
