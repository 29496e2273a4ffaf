//! C interface to `pitrend`.
//!
//! Every function returns a [`PitrendStatus`] and writes results through out
//! pointers. Simulated ensembles live behind the opaque [`PitrendEnsemble`]
//! handle, created by [`pitrend_ensemble_simulate`] and released with
//! [`pitrend_ensemble_free`]. Panics never cross the boundary; they surface
//! as `PITREND_STATUS_PANIC`.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pitrend::analytics::{
    full_info_finite_t, partial_info_finite_t_mean, partial_info_finite_t_var, sq_filter_autocov, AnalyticReport,
    AnalyticsError,
};
use pitrend::model::{params_from_snr, ModelParams, ParamError, RawParams};
use pitrend::sim::{mc_stats, simulate_ensemble, Ensemble, InitialTrend, SimConfig, SimError, Strategy};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PitrendStatus {
    Ok = 0,
    NullPointer = 1,
    NonPositiveParameter = 2,
    NonFiniteParameter = 3,
    NegativeTime = 4,
    QuadratureFailure = 5,
    UnsupportedInitialState = 6,
    UnstableStep = 7,
    OverflowGuard = 8,
    InsufficientPaths = 9,
    DegenerateVariance = 10,
    InvalidConfig = 11,
    InvalidArgument = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PitrendStrategy {
    Full = 0,
    Partial = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PitrendInitialTrend {
    Fixed = 0,
    SteadyStatePrior = 1,
    Stationary = 2,
}

/// Model parameters. `mu0` and `muhat0` are the initial trend and filter.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitrendParams {
    pub lambda: f64,
    pub sigma_mu: f64,
    pub sigma_s: f64,
    pub mu0: f64,
    pub muhat0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PitrendAnalyticReport {
    pub lambda: f64,
    pub snr: f64,
    pub sigma_s: f64,
    pub beta: f64,
    pub full_mean_rate: f64,
    pub full_var_rate_paper: f64,
    pub full_var_rate_corrected: f64,
    pub full_sharpe_paper: f64,
    pub full_sharpe_corrected: f64,
    pub partial_mean_rate: f64,
    pub partial_var_rate: f64,
    pub partial_sharpe: f64,
    pub pif_paper: f64,
    pub pif_corrected: f64,
    pub optimal_lambda: f64,
    pub max_partial_sharpe: f64,
    pub profit_threshold: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitrendSimConfig {
    pub params: PitrendParams,
    pub horizon: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub initial_trend: PitrendInitialTrend,
    /// Largest admissible `|log wealth|`; 0 selects the default.
    pub wealth_bound: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PitrendStats {
    pub mean_rate: f64,
    pub mean_rate_se: f64,
    pub var_rate: f64,
    pub var_rate_se: f64,
    pub sharpe: f64,
    pub n_paths: usize,
    pub horizon: f64,
    pub dt: f64,
}

/// Values of one path at the horizon.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PitrendTerminal {
    pub mu: f64,
    pub mu_hat: f64,
    pub log_wealth_full: f64,
    pub log_wealth_partial: f64,
    pub option_profile: f64,
    pub trading_impact: f64,
}

/// Opaque simulated ensemble.
pub struct PitrendEnsemble {
    inner: Ensemble,
}

impl From<ParamError> for PitrendStatus {
    fn from(e: ParamError) -> Self {
        match e {
            ParamError::NonPositiveParameter(_) => PitrendStatus::NonPositiveParameter,
            ParamError::NonFiniteParameter(_) => PitrendStatus::NonFiniteParameter,
        }
    }
}

impl From<AnalyticsError> for PitrendStatus {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::NegativeTime(_) => PitrendStatus::NegativeTime,
            AnalyticsError::QuadratureFailure { .. } => PitrendStatus::QuadratureFailure,
            AnalyticsError::UnsupportedInitialState => PitrendStatus::UnsupportedInitialState,
        }
    }
}

impl From<SimError> for PitrendStatus {
    fn from(e: SimError) -> Self {
        match e {
            SimError::UnstableStep { .. } => PitrendStatus::UnstableStep,
            SimError::OverflowGuard { .. } => PitrendStatus::OverflowGuard,
            SimError::InsufficientPaths(_) => PitrendStatus::InsufficientPaths,
            SimError::DegenerateVariance => PitrendStatus::DegenerateVariance,
            SimError::InvalidConfig(_) => PitrendStatus::InvalidConfig,
            SimError::Param(p) => p.into(),
            SimError::Analytics(a) => a.into(),
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), PitrendStatus>) -> PitrendStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PitrendStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => PitrendStatus::Panic,
    }
}

fn model(p: &PitrendParams) -> Result<ModelParams, PitrendStatus> {
    let raw = RawParams {
        mu0: Some(p.mu0),
        muhat0: Some(p.muhat0),
        ..RawParams::new(p.lambda, p.sigma_mu, p.sigma_s)
    };
    Ok(pitrend::model::validate_params(raw)?)
}

fn from_model(p: &ModelParams) -> PitrendParams {
    PitrendParams {
        lambda: p.lambda(),
        sigma_mu: p.sigma_mu(),
        sigma_s: p.sigma_s(),
        mu0: p.mu0(),
        muhat0: p.muhat0(),
    }
}

/// # Safety
/// `ptr` must be null or valid for reads of `T`.
unsafe fn read<'a, T>(ptr: *const T) -> Result<&'a T, PitrendStatus> {
    ptr.as_ref().ok_or(PitrendStatus::NullPointer)
}

/// # Safety
/// `ptr` must be null or valid for writes of `T`.
unsafe fn write<T>(ptr: *mut T, value: T) -> Result<(), PitrendStatus> {
    if ptr.is_null() {
        return Err(PitrendStatus::NullPointer);
    }
    ptr.write(value);
    Ok(())
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn pitrend_status_message(status: PitrendStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        PitrendStatus::Ok => b"ok\0",
        PitrendStatus::NullPointer => b"null pointer argument\0",
        PitrendStatus::NonPositiveParameter => b"parameter must be positive\0",
        PitrendStatus::NonFiniteParameter => b"parameter must be finite\0",
        PitrendStatus::NegativeTime => b"time must be finite and non-negative\0",
        PitrendStatus::QuadratureFailure => b"quadrature did not converge\0",
        PitrendStatus::UnsupportedInitialState => b"finite-horizon moments need a zero initial trend and filter\0",
        PitrendStatus::UnstableStep => b"time step at or above the stability limit\0",
        PitrendStatus::OverflowGuard => b"log wealth exceeded the configured bound\0",
        PitrendStatus::InsufficientPaths => b"at least 2 paths are required\0",
        PitrendStatus::DegenerateVariance => b"sample variance is zero\0",
        PitrendStatus::InvalidConfig => b"invalid simulation configuration\0",
        PitrendStatus::InvalidArgument => b"invalid argument\0",
        PitrendStatus::Panic => b"internal error\0",
    };
    msg.as_ptr().cast()
}

/// Validates `params`; writes nothing.
///
/// # Safety
/// `params` must be null or point to a readable `PitrendParams`.
#[no_mangle]
pub unsafe extern "C" fn pitrend_params_validate(params: *const PitrendParams) -> PitrendStatus {
    guard(|| model(read(params)?).map(|_| ()))
}

/// Parameters with `sigma_mu = sigma_s sqrt(2 lambda snr)` and a zero start.
///
/// # Safety
/// `out` must be null or point to writable memory for a `PitrendParams`.
#[no_mangle]
pub unsafe extern "C" fn pitrend_params_from_snr(
    snr: f64,
    lambda: f64,
    sigma_s: f64,
    out: *mut PitrendParams,
) -> PitrendStatus {
    guard(|| write(out, from_model(&params_from_snr(snr, lambda, sigma_s)?)))
}

/// Writes `beta` and `snr` of `params`; either out pointer may be null.
///
/// # Safety
/// `params` must point to a readable `PitrendParams`; non-null out pointers
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn pitrend_beta_snr(
    params: *const PitrendParams,
    beta: *mut f64,
    snr: *mut f64,
) -> PitrendStatus {
    guard(|| {
        let p = model(read(params)?)?;
        if !beta.is_null() {
            beta.write(p.beta());
        }
        if !snr.is_null() {
            snr.write(p.snr());
        }
        Ok(())
    })
}

/// Every closed-form quantity at `(lambda, snr, sigma_s)`.
///
/// # Safety
/// `out` must be null or point to writable memory for a `PitrendAnalyticReport`.
#[no_mangle]
pub unsafe extern "C" fn pitrend_analytic_report(
    lambda: f64,
    snr: f64,
    sigma_s: f64,
    out: *mut PitrendAnalyticReport,
) -> PitrendStatus {
    guard(|| {
        let r = AnalyticReport::new(lambda, snr, sigma_s)?;
        write(
            out,
            PitrendAnalyticReport {
                lambda: r.lambda,
                snr: r.snr,
                sigma_s: r.sigma_s,
                beta: r.beta,
                full_mean_rate: r.full_mean_rate,
                full_var_rate_paper: r.full_var_rate_paper,
                full_var_rate_corrected: r.full_var_rate_corrected,
                full_sharpe_paper: r.full_sharpe_paper,
                full_sharpe_corrected: r.full_sharpe_corrected,
                partial_mean_rate: r.partial_mean_rate,
                partial_var_rate: r.partial_var_rate,
                partial_sharpe: r.partial_sharpe,
                pif_paper: r.pif_paper,
                pif_corrected: r.pif_corrected,
                optimal_lambda: r.optimal_lambda,
                max_partial_sharpe: r.max_partial_sharpe,
                profit_threshold: r.profit_threshold,
            },
        )
    })
}

/// Mean and variance of the full-information log return over `[0, horizon]`.
///
/// # Safety
/// `params` must point to a readable `PitrendParams`; `mean` and `variance`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn pitrend_full_info_finite_t(
    params: *const PitrendParams,
    horizon: f64,
    mean: *mut f64,
    variance: *mut f64,
) -> PitrendStatus {
    guard(|| {
        let m = full_info_finite_t(horizon, &model(read(params)?)?)?;
        write(mean, m.mean)?;
        write(variance, m.variance)
    })
}

/// Mean and variance of the partial-information log return over
/// `[0, horizon]`. The variance is computed by adaptive quadrature.
///
/// # Safety
/// As for [`pitrend_full_info_finite_t`].
#[no_mangle]
pub unsafe extern "C" fn pitrend_partial_info_finite_t(
    params: *const PitrendParams,
    horizon: f64,
    mean: *mut f64,
    variance: *mut f64,
) -> PitrendStatus {
    guard(|| {
        let p = model(read(params)?)?;
        if mean.is_null() || variance.is_null() {
            return Err(PitrendStatus::NullPointer);
        }
        write(mean, partial_info_finite_t_mean(horizon, &p)?)?;
        write(variance, partial_info_finite_t_var(horizon, &p)?)
    })
}

/// `Cov[muhat_s^2, muhat_t^2]`.
///
/// # Safety
/// `params` must point to a readable `PitrendParams`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pitrend_sq_filter_autocov(
    params: *const PitrendParams,
    s: f64,
    t: f64,
    out: *mut f64,
) -> PitrendStatus {
    guard(|| write(out, sq_filter_autocov(s, t, &model(read(params)?)?)?))
}

/// Simulates an ensemble and stores a new handle in `*out`. On failure
/// `*out` is set to null.
///
/// # Safety
/// `config` must point to a readable `PitrendSimConfig`; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pitrend_ensemble_simulate(
    config: *const PitrendSimConfig,
    out: *mut *mut PitrendEnsemble,
) -> PitrendStatus {
    if out.is_null() {
        return PitrendStatus::NullPointer;
    }
    out.write(std::ptr::null_mut());
    guard(|| {
        let c = read(config)?;
        let mut cfg = SimConfig::new(model(&c.params)?, c.horizon, c.n_paths, c.seed)
            .with_dt(c.dt)
            .with_initial_trend(match c.initial_trend {
                PitrendInitialTrend::Fixed => InitialTrend::Fixed,
                PitrendInitialTrend::SteadyStatePrior => InitialTrend::SteadyStatePrior,
                PitrendInitialTrend::Stationary => InitialTrend::Stationary,
            });
        if c.wealth_bound != 0.0 {
            cfg.wealth_bound = c.wealth_bound;
        }
        let inner = simulate_ensemble(&cfg)?;
        out.write(Box::into_raw(Box::new(PitrendEnsemble { inner })));
        Ok(())
    })
}

/// Number of paths in the ensemble, or 0 for a null handle.
///
/// # Safety
/// `ensemble` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pitrend_ensemble_n_paths(ensemble: *const PitrendEnsemble) -> usize {
    ensemble.as_ref().map_or(0, |e| e.inner.n_paths())
}

/// Annualized statistics of the terminal log returns of one strategy.
///
/// # Safety
/// `ensemble` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pitrend_ensemble_stats(
    ensemble: *const PitrendEnsemble,
    strategy: PitrendStrategy,
    out: *mut PitrendStats,
) -> PitrendStatus {
    guard(|| {
        let e = read(ensemble)?;
        let s = mc_stats(
            &e.inner,
            match strategy {
                PitrendStrategy::Full => Strategy::Full,
                PitrendStrategy::Partial => Strategy::Partial,
            },
        )?;
        write(
            out,
            PitrendStats {
                mean_rate: s.mean_rate,
                mean_rate_se: s.mean_rate_se,
                var_rate: s.var_rate,
                var_rate_se: s.var_rate_se,
                sharpe: s.sharpe,
                n_paths: s.n_paths,
                horizon: s.horizon,
                dt: s.dt,
            },
        )
    })
}

/// Horizon values of path `index`.
///
/// # Safety
/// `ensemble` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pitrend_ensemble_terminal(
    ensemble: *const PitrendEnsemble,
    index: usize,
    out: *mut PitrendTerminal,
) -> PitrendStatus {
    guard(|| {
        let e = read(ensemble)?;
        let path = e.inner.summaries.get(index).ok_or(PitrendStatus::InvalidArgument)?;
        let t = path.terminal();
        write(
            out,
            PitrendTerminal {
                mu: t.mu,
                mu_hat: t.mu_hat,
                log_wealth_full: t.log_wealth_full,
                log_wealth_partial: t.log_wealth_partial,
                option_profile: t.option_profile,
                trading_impact: t.trading_impact,
            },
        )
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `ensemble` must be null or a handle from [`pitrend_ensemble_simulate`]
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pitrend_ensemble_free(ensemble: *mut PitrendEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_errors_keep_their_code() {
        let e = SimError::Param(ParamError::NonFiniteParameter("lambda"));
        assert_eq!(PitrendStatus::from(e), PitrendStatus::NonFiniteParameter);
        let e = SimError::Analytics(AnalyticsError::NegativeTime(-1.0));
        assert_eq!(PitrendStatus::from(e), PitrendStatus::NegativeTime);
    }

    #[test]
    fn panics_become_a_status() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let status = guard(|| panic!("boom"));
        std::panic::set_hook(prev);
        assert_eq!(status, PitrendStatus::Panic);
    }
}
