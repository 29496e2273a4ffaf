//! Log-utility trading under an unobservable Ornstein-Uhlenbeck trend.
//!
//! * [`model`]: parameters and the derived `beta` and `snr`.
//! * [`analytics`]: asymptotic and finite-horizon closed forms.
//! * [`sim`]: Monte Carlo engine and ensemble statistics.
//! * [`cli`]: the commands behind the `pitrend` binary.

pub mod analytics;
pub mod cli;
pub mod model;
pub mod sim;
