//! Model parameters for the hidden-trend market.
//!
//! The risky asset follows `dS/S = mu dt + sigma_s dW^S` where the trend `mu`
//! is a zero-reverting Ornstein-Uhlenbeck process with speed `lambda` and
//! volatility `sigma_mu`. Everything downstream is a function of the triple
//! `(lambda, sigma_mu, sigma_s)` through two derived scalars:
//!
//! * `beta = sqrt(1 + sigma_mu^2 / (lambda^2 sigma_s^2))`, the steady-state
//!   filter gain parameter;
//! * `snr = sigma_mu^2 / (2 lambda sigma_s^2)`, the stationary trend variance
//!   over the squared price volatility.
//!
//! All rates are annualized: time is measured in years.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{0}` must be strictly positive")]
    NonPositiveParameter(&'static str),
    #[error("parameter `{0}` must be finite")]
    NonFiniteParameter(&'static str),
}

impl ParamError {
    /// Name of the offending field.
    pub fn field(&self) -> &'static str {
        match self {
            ParamError::NonPositiveParameter(name) | ParamError::NonFiniteParameter(name) => name,
        }
    }
}

/// Unvalidated parameter set, as read from flags or a config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub lambda: f64,
    pub sigma_mu: f64,
    pub sigma_s: f64,
    pub mu0: Option<f64>,
    pub muhat0: Option<f64>,
}

impl RawParams {
    pub fn new(lambda: f64, sigma_mu: f64, sigma_s: f64) -> Self {
        RawParams {
            lambda,
            sigma_mu,
            sigma_s,
            mu0: None,
            muhat0: None,
        }
    }
}

/// Validated model parameters. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda: f64,
    sigma_mu: f64,
    sigma_s: f64,
    mu0: f64,
    muhat0: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if !value.is_finite() {
        return Err(ParamError::NonFiniteParameter(name));
    }
    if value <= 0.0 {
        return Err(ParamError::NonPositiveParameter(name));
    }
    Ok(value)
}

fn check_finite(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ParamError::NonFiniteParameter(name))
    }
}

/// Validates a raw parameter set. Initial trend and filter values default to 0.
pub fn validate_params(raw: RawParams) -> Result<ModelParams, ParamError> {
    Ok(ModelParams {
        lambda: check_positive("lambda", raw.lambda)?,
        sigma_mu: check_positive("sigma_mu", raw.sigma_mu)?,
        sigma_s: check_positive("sigma_s", raw.sigma_s)?,
        mu0: check_finite("mu0", raw.mu0.unwrap_or(0.0))?,
        muhat0: check_finite("muhat0", raw.muhat0.unwrap_or(0.0))?,
    })
}

/// Builds parameters from the sweep coordinates `(snr, lambda)` by inverting
/// `snr = sigma_mu^2 / (2 lambda sigma_s^2)`.
pub fn params_from_snr(snr: f64, lambda: f64, sigma_s: f64) -> Result<ModelParams, ParamError> {
    let snr = check_positive("snr", snr)?;
    let lambda = check_positive("lambda", lambda)?;
    let sigma_s = check_positive("sigma_s", sigma_s)?;
    let sigma_mu = sigma_s * (2.0 * lambda * snr).sqrt();
    validate_params(RawParams::new(lambda, sigma_mu, sigma_s))
}

impl ModelParams {
    pub fn new(lambda: f64, sigma_mu: f64, sigma_s: f64) -> Result<Self, ParamError> {
        validate_params(RawParams::new(lambda, sigma_mu, sigma_s))
    }

    /// Returns a copy with overridden initial trend and filter values.
    pub fn with_initial(self, mu0: f64, muhat0: f64) -> Result<Self, ParamError> {
        Ok(ModelParams {
            mu0: check_finite("mu0", mu0)?,
            muhat0: check_finite("muhat0", muhat0)?,
            ..self
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma_mu(&self) -> f64 {
        self.sigma_mu
    }

    pub fn sigma_s(&self) -> f64 {
        self.sigma_s
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn muhat0(&self) -> f64 {
        self.muhat0
    }

    /// `sigma_mu^2 / (lambda^2 sigma_s^2)`, i.e. `beta^2 - 1`.
    fn gain_ratio(&self) -> f64 {
        let r = self.sigma_mu / (self.lambda * self.sigma_s);
        r * r
    }

    pub fn beta(&self) -> f64 {
        (1.0 + self.gain_ratio()).sqrt()
    }

    /// `beta - 1`, computed without cancellation for weak signals.
    pub fn beta_minus_one(&self) -> f64 {
        sqrt1p_m1(self.gain_ratio())
    }

    pub fn snr(&self) -> f64 {
        let r = self.sigma_mu / self.sigma_s;
        r * r / (2.0 * self.lambda)
    }

    /// Filter gain on realized returns, `lambda (beta - 1)`.
    pub fn filter_gain(&self) -> f64 {
        self.lambda * self.beta_minus_one()
    }
}

pub fn beta(params: &ModelParams) -> f64 {
    params.beta()
}

pub fn snr(params: &ModelParams) -> f64 {
    params.snr()
}

/// `sqrt(1 + x) - 1` without loss of precision for small `x`.
pub(crate) fn sqrt1p_m1(x: f64) -> f64 {
    x / ((1.0 + x).sqrt() + 1.0)
}
