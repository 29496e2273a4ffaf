//! Exact first moments of the discretized scheme.
//!
//! The engine's state `(mu, muhat)` is a linear Gaussian recursion, so its
//! mean and covariance propagate in closed form, and the expected log-wealth
//! increments follow from them. This gives the expectation that the Monte
//! Carlo estimate converges to at a given `dt`, including the time
//! discretization error.

use super::engine::{InitialTrend, SimConfig};
use super::SimError;
use crate::analytics::asymptotic::stationary_filter_second_moment;
use crate::analytics::steady_state_error_variance;

/// Expected terminal log returns of both strategies under the discrete scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMeans {
    pub full: f64,
    pub partial: f64,
}

pub fn discrete_expected_log_returns(config: &SimConfig) -> Result<DiscreteMeans, SimError> {
    let schedule = config.schedule()?;
    let p = &config.params;
    let dt = config.dt;
    let l = p.lambda();
    let s2 = p.sigma_s().powi(2);
    let g = p.filter_gain();
    let a = (-l * dt).exp();
    let q = p.sigma_mu().powi(2) * -(-2.0 * l * dt).exp_m1() / (2.0 * l);
    let keep = 1.0 - l * p.beta() * dt;

    // means and second moments about zero: E mu, E muhat, E mu^2, E mu muhat, E muhat^2
    let (mut m, mut h) = (p.mu0(), p.muhat0());
    let (mut mm, mut mh, mut hh) = match config.initial_trend {
        InitialTrend::Fixed => (m * m, m * h, h * h),
        InitialTrend::SteadyStatePrior => {
            m = h;
            (h * h + steady_state_error_variance(p), h * h, h * h)
        }
        InitialTrend::Stationary => {
            m = 0.0;
            h = 0.0;
            let v = stationary_filter_second_moment(p);
            (v + steady_state_error_variance(p), v, v)
        }
    };
    let (mut full, mut partial) = (0.0, 0.0);
    for _ in 0..schedule.n_steps {
        full += 0.5 * mm * dt / s2;
        partial += (mh - 0.5 * hh) * dt / s2;
        // muhat' = keep muhat + g (mu dt + sigma sqrt(dt) eta), mu' = a mu + sqrt(q) xi
        let hh_next = keep * keep * hh + 2.0 * keep * g * dt * mh + g * g * dt * dt * mm + g * g * s2 * dt;
        let mh_next = a * (keep * mh + g * dt * mm);
        mm = a * a * mm + q;
        mh = mh_next;
        hh = hh_next;
        let h_next = keep * h + g * dt * m;
        m *= a;
        h = h_next;
    }
    Ok(DiscreteMeans { full, partial })
}
