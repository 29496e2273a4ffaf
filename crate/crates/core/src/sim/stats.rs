//! Ensemble statistics.
//!
//! All reductions run sequentially in path order so that results are
//! bit-identical however the paths were scheduled.

use super::engine::{Ensemble, Snapshot};
use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Full,
    Partial,
}

impl Strategy {
    pub fn log_return(self, s: &Snapshot) -> f64 {
        match self {
            Strategy::Full => s.log_wealth_full,
            Strategy::Partial => s.log_wealth_partial,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Full => "full",
            Strategy::Partial => "partial",
        }
    }
}

/// Sample mean and unbiased variance with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMoments {
    pub n: usize,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    /// Large-sample standard error of the unbiased variance estimator,
    /// `sqrt((m4 - s^4 (n - 3) / (n - 1)) / n)`.
    pub variance_se: f64,
}

pub fn sample_moments(xs: &[f64]) -> Result<SampleMoments, SimError> {
    let n = xs.len();
    if n < 2 {
        return Err(SimError::InsufficientPaths(n));
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &x in xs {
        let d2 = (x - mean) * (x - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    let variance = m2 / (nf - 1.0);
    let m4 = m4 / nf;
    let var_of_var = (m4 - variance * variance * (nf - 3.0) / (nf - 1.0)) / nf;
    Ok(SampleMoments {
        n,
        mean,
        mean_se: (variance / nf).sqrt(),
        variance,
        variance_se: var_of_var.max(0.0).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceEstimate {
    pub covariance: f64,
    pub se: f64,
}

/// Unbiased sample covariance; the standard error is that of the mean of the
/// centred cross products.
pub fn sample_covariance(xs: &[f64], ys: &[f64]) -> Result<CovarianceEstimate, SimError> {
    assert_eq!(xs.len(), ys.len(), "paired samples");
    let n = xs.len();
    if n < 2 {
        return Err(SimError::InsufficientPaths(n));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let products: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let covariance = products.iter().sum::<f64>() / (nf - 1.0);
    let pm = products.iter().sum::<f64>() / nf;
    let spread = products.iter().map(|p| (p - pm) * (p - pm)).sum::<f64>() / (nf - 1.0);
    Ok(CovarianceEstimate {
        covariance,
        se: (spread / nf).sqrt(),
    })
}

/// Annualized statistics of log returns over `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCStats {
    pub mean_rate: f64,
    pub mean_rate_se: f64,
    pub var_rate: f64,
    pub var_rate_se: f64,
    /// `mean_rate / sqrt(var_rate)`.
    pub sharpe: f64,
    pub n_paths: usize,
    pub horizon: f64,
    pub dt: f64,
}

impl MCStats {
    pub fn from_log_returns(log_returns: &[f64], horizon: f64, dt: f64) -> Result<Self, SimError> {
        let m = sample_moments(log_returns)?;
        let scale = log_returns.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        // a spread at rounding level means the returns are all equal
        if !(m.variance > (16.0 * f64::EPSILON * scale).powi(2)) {
            return Err(SimError::DegenerateVariance);
        }
        let mean_rate = m.mean / horizon;
        let var_rate = m.variance / horizon;
        Ok(MCStats {
            mean_rate,
            mean_rate_se: m.mean_se / horizon,
            var_rate,
            var_rate_se: m.variance_se / horizon,
            sharpe: mean_rate / var_rate.sqrt(),
            n_paths: m.n,
            horizon,
            dt,
        })
    }

    /// `(key, value)` pairs in a fixed order.
    pub fn fields(&self) -> [(&'static str, f64); 8] {
        [
            ("mean_rate", self.mean_rate),
            ("mean_rate_se", self.mean_rate_se),
            ("var_rate", self.var_rate),
            ("var_rate_se", self.var_rate_se),
            ("sharpe", self.sharpe),
            ("n_paths", self.n_paths as f64),
            ("horizon", self.horizon),
            ("dt", self.dt),
        ]
    }
}

/// Statistics at the horizon.
pub fn mc_stats(ensemble: &Ensemble, strategy: Strategy) -> Result<MCStats, SimError> {
    mc_stats_at(ensemble, strategy, ensemble.config.horizon)
}

/// Statistics of the log return accumulated up to observation time `time`.
pub fn mc_stats_at(ensemble: &Ensemble, strategy: Strategy, time: f64) -> Result<MCStats, SimError> {
    let idx = ensemble
        .snapshot_index(time)
        .ok_or_else(|| SimError::InvalidConfig(format!("no snapshot at t = {time}")))?;
    if !(time > 0.0) {
        return Err(SimError::InvalidConfig("statistics need a positive time".into()));
    }
    let xs: Vec<f64> = ensemble.snapshots_at(idx).map(|s| strategy.log_return(s)).collect();
    MCStats::from_log_returns(&xs, time, ensemble.schedule.dt)
}
