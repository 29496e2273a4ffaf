//! Closed-form performance of the full- and partial-information strategies.
//!
//! Where the published full-information variance rate disagrees with its own
//! derivation, both values are exposed through [`Variant`].

pub mod asymptotic;
pub mod finite;
pub mod quadrature;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{params_from_snr, ModelParams, ParamError};

pub use asymptotic::{
    full_info_mean_rate, full_info_sharpe, full_info_var_rate, max_partial_sharpe, optimal_lambda,
    partial_info_mean_rate, partial_info_sharpe, partial_info_var_rate, pif, profit_threshold, PIF_BOUND,
};
pub use finite::{
    filter_mean, filter_variance, full_info_finite_t, ou_trend_variance, partial_info_finite_t_mean,
    partial_info_finite_t_var, sq_filter_autocov, steady_state_error_variance, FiniteMoments,
};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("time must be finite and non-negative, got {0}")]
    NegativeTime(f64),
    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    QuadratureFailure { estimate: f64, error: f64 },
    #[error("finite-horizon moments require a zero initial trend and filter")]
    UnsupportedInitialState,
}

impl From<quadrature::NotConverged> for AnalyticsError {
    fn from(e: quadrature::NotConverged) -> Self {
        AnalyticsError::QuadratureFailure {
            estimate: e.estimate,
            error: e.error,
        }
    }
}

/// Which full-information variance rate to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// The published limit, `snr`.
    #[default]
    Paper,
    /// The limit of the exact finite-horizon variance, `snr + snr^2 / (2 lambda)`.
    Corrected,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Paper => "paper",
            Variant::Corrected => "corrected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variant `{0}` (expected `paper` or `corrected`)")]
pub struct UnknownVariant(pub String);

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(Variant::Paper),
            "corrected" => Ok(Variant::Corrected),
            _ => Err(UnknownVariant(s.to_string())),
        }
    }
}

/// Every closed-form quantity at one `(lambda, snr)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticReport {
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

impl AnalyticReport {
    pub fn new(lambda: f64, snr: f64, sigma_s: f64) -> Result<Self, ParamError> {
        let params = params_from_snr(snr, lambda, sigma_s)?;
        Ok(Self::from_params(&params))
    }

    pub fn from_params(params: &ModelParams) -> Self {
        let (lambda, snr) = (params.lambda(), params.snr());
        AnalyticReport {
            lambda,
            snr,
            sigma_s: params.sigma_s(),
            beta: params.beta(),
            full_mean_rate: full_info_mean_rate(snr),
            full_var_rate_paper: full_info_var_rate(snr, lambda, Variant::Paper),
            full_var_rate_corrected: full_info_var_rate(snr, lambda, Variant::Corrected),
            full_sharpe_paper: full_info_sharpe(snr, lambda, Variant::Paper),
            full_sharpe_corrected: full_info_sharpe(snr, lambda, Variant::Corrected),
            partial_mean_rate: partial_info_mean_rate(snr, lambda),
            partial_var_rate: partial_info_var_rate(snr, lambda),
            partial_sharpe: partial_info_sharpe(snr, lambda),
            pif_paper: pif(snr, lambda, Variant::Paper),
            pif_corrected: pif(snr, lambda, Variant::Corrected),
            optimal_lambda: optimal_lambda(snr),
            max_partial_sharpe: max_partial_sharpe(snr),
            profit_threshold: profit_threshold(params),
        }
    }

    pub fn full_var_rate(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Paper => self.full_var_rate_paper,
            Variant::Corrected => self.full_var_rate_corrected,
        }
    }

    pub fn full_sharpe(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Paper => self.full_sharpe_paper,
            Variant::Corrected => self.full_sharpe_corrected,
        }
    }

    pub fn pif(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Paper => self.pif_paper,
            Variant::Corrected => self.pif_corrected,
        }
    }

    /// `(key, value)` pairs in a fixed order.
    pub fn fields(&self) -> [(&'static str, f64); 17] {
        [
            ("lambda", self.lambda),
            ("snr", self.snr),
            ("sigma_s", self.sigma_s),
            ("beta", self.beta),
            ("full_mean_rate", self.full_mean_rate),
            ("full_var_rate_paper", self.full_var_rate_paper),
            ("full_var_rate_corrected", self.full_var_rate_corrected),
            ("full_sharpe_paper", self.full_sharpe_paper),
            ("full_sharpe_corrected", self.full_sharpe_corrected),
            ("partial_mean_rate", self.partial_mean_rate),
            ("partial_var_rate", self.partial_var_rate),
            ("partial_sharpe", self.partial_sharpe),
            ("pif_paper", self.pif_paper),
            ("pif_corrected", self.pif_corrected),
            ("optimal_lambda", self.optimal_lambda),
            ("max_partial_sharpe", self.max_partial_sharpe),
            ("profit_threshold", self.profit_threshold),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_at_canonical_point() {
        let r = AnalyticReport::new(1.0, 1.5, 1.0).unwrap();
        assert!((r.beta - 2.0).abs() < 1e-15);
        assert!((r.partial_sharpe - 0.235_702).abs() < 1e-6);
        assert!((r.pif_paper - 0.384_900).abs() < 1e-6);
        assert!((r.full_sharpe_corrected - 0.462_910).abs() < 1e-6);
        assert!(r.partial_sharpe <= r.full_sharpe_paper);
        assert!(r.partial_mean_rate <= r.full_mean_rate);
        assert!((r.profit_threshold - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.full_var_rate(Variant::Corrected) - 2.625).abs() < 1e-12);
        assert_eq!(r.fields()[0], ("lambda", 1.0));
    }

    #[test]
    fn report_rejects_bad_lambda() {
        assert_eq!(
            AnalyticReport::new(-1.0, 1.5, 1.0).unwrap_err().field(),
            "lambda"
        );
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("paper".parse::<Variant>(), Ok(Variant::Paper));
        assert_eq!("Corrected".parse::<Variant>(), Ok(Variant::Corrected));
        assert!("other".parse::<Variant>().is_err());
        assert_eq!(Variant::Corrected.to_string(), "corrected");
    }
}
