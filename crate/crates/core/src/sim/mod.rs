//! Monte Carlo engine for the trend model and both trading strategies.

mod discrete;
mod engine;
mod filter_law;
mod rng;
mod stats;

use thiserror::Error;

use crate::analytics::AnalyticsError;
use crate::model::ParamError;

pub use discrete::{discrete_expected_log_returns, DiscreteMeans};
pub use engine::{
    simulate_ensemble, Ensemble, InitialTrend, PathRecord, PathSummary, Schedule, SimConfig, Snapshot,
    DEFAULT_DT, DEFAULT_WEALTH_BOUND,
};
pub use filter_law::{filter_law_check, filter_law_report, FilterLawReport, ZScore};
pub use rng::PathStream;
pub use stats::{
    mc_stats, mc_stats_at, sample_covariance, sample_moments, CovarianceEstimate, MCStats, SampleMoments, Strategy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("step {dt} is not below the stability limit {limit}")]
    UnstableStep { dt: f64, limit: f64 },
    #[error("log wealth left [-{bound}, {bound}] on path {path} at step {step}")]
    OverflowGuard { path: usize, step: usize, bound: f64 },
    #[error("at least 2 paths are required, got {0}")]
    InsufficientPaths(usize),
    #[error("sample variance is zero; the Sharpe ratio is undefined")]
    DegenerateVariance,
    #[error("{0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}
