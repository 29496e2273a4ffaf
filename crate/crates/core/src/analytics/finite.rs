//! Finite-horizon moments of the trend, the filter and both log returns.
//!
//! Variances and the log-return moments are for the centred start
//! `mu_0 = muhat_0 = 0`; the log-return moments reject any other start.

use super::quadrature::{self, Tolerance};
use super::AnalyticsError;
use crate::model::ModelParams;

fn check_time(t: f64) -> Result<f64, AnalyticsError> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(AnalyticsError::NegativeTime(t))
    }
}

fn check_centred(params: &ModelParams) -> Result<(), AnalyticsError> {
    if params.mu0() == 0.0 && params.muhat0() == 0.0 {
        Ok(())
    } else {
        Err(AnalyticsError::UnsupportedInitialState)
    }
}

/// `1 - exp(-2 lambda t)`.
fn one_minus_decay(lambda: f64, t: f64) -> f64 {
    -(-2.0 * lambda * t).exp_m1()
}

/// `int_0^T (1 - exp(-2 lambda t)) dt = T - (1 - exp(-2 lambda T)) / (2 lambda)`.
fn integrated_growth(lambda: f64, horizon: f64) -> f64 {
    horizon - one_minus_decay(lambda, horizon) / (2.0 * lambda)
}

/// `Var[mu_t] = sigma_mu^2 (1 - exp(-2 lambda t)) / (2 lambda)`.
pub fn ou_trend_variance(t: f64, params: &ModelParams) -> Result<f64, AnalyticsError> {
    let t = check_time(t)?;
    let l = params.lambda();
    Ok(params.sigma_mu().powi(2) * one_minus_decay(l, t) / (2.0 * l))
}

/// `Var[muhat_t] = (lambda sigma_s (beta - 1))^2 (1 - exp(-2 lambda t)) / (2 lambda)`.
///
/// Exact when the filter is the conditional mean from the start, i.e. when
/// `mu_0` is drawn from the steady-state prior around `muhat_0`; from a
/// fixed `mu_0` it holds once `exp(-lambda beta t)` has decayed.
pub fn filter_variance(t: f64, params: &ModelParams) -> Result<f64, AnalyticsError> {
    let t = check_time(t)?;
    let l = params.lambda();
    let g = params.filter_gain() * params.sigma_s();
    Ok(g * g * one_minus_decay(l, t) / (2.0 * l))
}

/// `E[muhat_t] = mu_0 exp(-lambda t) + (muhat_0 - mu_0) exp(-lambda beta t)`.
pub fn filter_mean(t: f64, params: &ModelParams) -> Result<f64, AnalyticsError> {
    let t = check_time(t)?;
    let l = params.lambda();
    let (m0, mh0) = (params.mu0(), params.muhat0());
    Ok(m0 * (-l * t).exp() + (mh0 - m0) * (-l * params.beta() * t).exp())
}

/// Steady-state filtering error variance, `E[(mu - muhat)^2] = lambda sigma_s^2 (beta - 1)`.
pub fn steady_state_error_variance(params: &ModelParams) -> f64 {
    params.filter_gain() * params.sigma_s().powi(2)
}

/// Prefactor `lambda^2 sigma_s^4 (beta - 1)^4 / 2` of the squared-filter autocovariance.
fn autocov_scale(params: &ModelParams) -> f64 {
    let g = params.filter_gain() * params.sigma_s();
    g.powi(4) / (2.0 * params.lambda().powi(2))
}

fn autocov_ordered(s: f64, t: f64, lambda: f64, scale: f64) -> f64 {
    // exp(-2 lambda t) (exp(2 lambda s) + exp(-2 lambda s) - 2)
    //   == exp(-2 lambda (t - s)) (1 - exp(-2 lambda s))^2, overflow-free
    let grow = one_minus_decay(lambda, s);
    scale * (-2.0 * lambda * (t - s)).exp() * grow * grow
}

/// `Cov[muhat_s^2, muhat_t^2]`; symmetric in its time arguments.
pub fn sq_filter_autocov(s: f64, t: f64, params: &ModelParams) -> Result<f64, AnalyticsError> {
    let (s, t) = (check_time(s)?, check_time(t)?);
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    Ok(autocov_ordered(s, t, params.lambda(), autocov_scale(params)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteMoments {
    pub mean: f64,
    pub variance: f64,
}

/// `Var[int_0^T mu_t^2 dt]` by Isserlis' theorem, with a series branch for short
/// horizons where the closed form cancels to O(x^4).
fn integrated_sq_trend_variance(params: &ModelParams, horizon: f64) -> f64 {
    let l = params.lambda();
    let x = l * horizon;
    let shape = if x < 0.5 {
        // sum_{n>=4} [4 (-2)^n + 8 n (-2)^{n-1} + (-4)^n] x^n / n!
        let mut sum = 0.0;
        let mut x_over_fact = x.powi(4) / 24.0;
        for n in 4..60 {
            let nf = n as f64;
            let m2 = (-2f64).powi(n);
            let coeff = 4.0 * m2 - 4.0 * nf * m2 + (-4f64).powi(n);
            sum += coeff * x_over_fact;
            x_over_fact *= x / (nf + 1.0);
        }
        sum
    } else {
        4.0 * x - 5.0 + (-2.0 * x).exp() * (8.0 * x + 4.0) + (-4.0 * x).exp()
    };
    params.sigma_mu().powi(4) * shape / (8.0 * l.powi(4))
}

/// Mean and variance of the full-information log return over `[0, T]`.
pub fn full_info_finite_t(horizon: f64, params: &ModelParams) -> Result<FiniteMoments, AnalyticsError> {
    let horizon = check_time(horizon)?;
    check_centred(params)?;
    let l = params.lambda();
    let s2 = params.sigma_s().powi(2);
    // int_0^T E[mu_t^2] dt
    let second_moment_integral = params.sigma_mu().powi(2) / (2.0 * l) * integrated_growth(l, horizon);
    let mean = second_moment_integral / (2.0 * s2);
    let variance = integrated_sq_trend_variance(params, horizon) / (4.0 * s2 * s2) + second_moment_integral / s2;
    Ok(FiniteMoments { mean, variance })
}

/// Expected partial-information log return over `[0, T]`: Option Profile plus
/// Trading Impact in expectation.
pub fn partial_info_finite_t_mean(horizon: f64, params: &ModelParams) -> Result<f64, AnalyticsError> {
    let horizon = check_time(horizon)?;
    check_centred(params)?;
    let l = params.lambda();
    let b = params.beta_minus_one();
    let beta = b + 1.0;
    let option_profile = b / 4.0 * one_minus_decay(l, horizon);
    let drift = beta / b - 0.5;
    let trading_impact = drift * (l / 2.0) * b * b * integrated_growth(l, horizon) - l * b / 2.0 * horizon;
    Ok(option_profile + trading_impact)
}

/// The three pieces of the partial-information log-return variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialVarianceTerms {
    /// `Var[muhat_T^2]`
    pub terminal_sq_var: f64,
    /// `Var[int_0^T muhat_t^2 dt]`
    pub integral_var: f64,
    /// `Cov[muhat_T^2, int_0^T muhat_t^2 dt]`
    pub cross_cov: f64,
}

/// Integrates the squared-filter autocovariance over `[0, T]` and `[0, T]^2`.
pub fn partial_variance_terms(horizon: f64, params: &ModelParams) -> Result<PartialVarianceTerms, AnalyticsError> {
    let horizon = check_time(horizon)?;
    let l = params.lambda();
    let scale = autocov_scale(params);
    let outer = Tolerance::default();
    let inner = Tolerance {
        rel: 1e-12,
        ..Tolerance::default()
    };
    let terminal_sq_var = autocov_ordered(horizon, horizon, l, scale);
    let cross_cov = quadrature::integrate(|s| autocov_ordered(s, horizon, l, scale), 0.0, horizon, outer)?;

    let mut inner_failure = None;
    let half = quadrature::integrate(
        |t| match quadrature::integrate(|s| autocov_ordered(s, t, l, scale), 0.0, t, inner) {
            Ok(v) => v,
            Err(e) => {
                inner_failure.get_or_insert(e);
                e.estimate
            }
        },
        0.0,
        horizon,
        outer,
    )?;
    if let Some(e) = inner_failure {
        return Err(e.into());
    }
    Ok(PartialVarianceTerms {
        terminal_sq_var,
        integral_var: 2.0 * half,
        cross_cov,
    })
}

/// Variance of the partial-information log return over `[0, T]`.
///
/// The log return is `a (muhat_T^2 - muhat_0^2) + b int muhat^2 dt - c T` with
/// `a = 1 / (2 sigma_s^2 lambda (beta - 1))` and
/// `b = (beta / (beta - 1) - 1/2) / sigma_s^2`, so its variance is
/// `a^2 Var[muhat_T^2] + b^2 Var[int] + 2 a b Cov[muhat_T^2, int]`.
pub fn partial_info_finite_t_var(horizon: f64, params: &ModelParams) -> Result<f64, AnalyticsError> {
    check_centred(params)?;
    let terms = partial_variance_terms(horizon, params)?;
    let s2 = params.sigma_s().powi(2);
    let b = params.beta_minus_one();
    let a = 1.0 / (2.0 * s2 * params.lambda() * b);
    let drift = ((b + 1.0) / b - 0.5) / s2;
    Ok(a * a * terms.terminal_sq_var + drift * drift * terms.integral_var + 2.0 * a * drift * terms.cross_cov)
}
