#ifndef PITREND_H
#define PITREND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PitrendStatus {
  PITREND_STATUS_OK = 0,
  PITREND_STATUS_NULL_POINTER = 1,
  PITREND_STATUS_NON_POSITIVE_PARAMETER = 2,
  PITREND_STATUS_NON_FINITE_PARAMETER = 3,
  PITREND_STATUS_NEGATIVE_TIME = 4,
  PITREND_STATUS_QUADRATURE_FAILURE = 5,
  PITREND_STATUS_UNSUPPORTED_INITIAL_STATE = 6,
  PITREND_STATUS_UNSTABLE_STEP = 7,
  PITREND_STATUS_OVERFLOW_GUARD = 8,
  PITREND_STATUS_INSUFFICIENT_PATHS = 9,
  PITREND_STATUS_DEGENERATE_VARIANCE = 10,
  PITREND_STATUS_INVALID_CONFIG = 11,
  PITREND_STATUS_INVALID_ARGUMENT = 12,
  PITREND_STATUS_PANIC = 13,
} PitrendStatus;

typedef enum PitrendInitialTrend {
  PITREND_INITIAL_TREND_FIXED = 0,
  PITREND_INITIAL_TREND_STEADY_STATE_PRIOR = 1,
  PITREND_INITIAL_TREND_STATIONARY = 2,
} PitrendInitialTrend;

typedef enum PitrendStrategy {
  PITREND_STRATEGY_FULL = 0,
  PITREND_STRATEGY_PARTIAL = 1,
} PitrendStrategy;

/**
 * Opaque simulated ensemble.
 */
typedef struct PitrendEnsemble PitrendEnsemble;

/**
 * Model parameters. `mu0` and `muhat0` are the initial trend and filter.
 */
typedef struct PitrendParams {
  double lambda;
  double sigma_mu;
  double sigma_s;
  double mu0;
  double muhat0;
} PitrendParams;

typedef struct PitrendAnalyticReport {
  double lambda;
  double snr;
  double sigma_s;
  double beta;
  double full_mean_rate;
  double full_var_rate_paper;
  double full_var_rate_corrected;
  double full_sharpe_paper;
  double full_sharpe_corrected;
  double partial_mean_rate;
  double partial_var_rate;
  double partial_sharpe;
  double pif_paper;
  double pif_corrected;
  double optimal_lambda;
  double max_partial_sharpe;
  double profit_threshold;
} PitrendAnalyticReport;

typedef struct PitrendSimConfig {
  struct PitrendParams params;
  double horizon;
  double dt;
  size_t n_paths;
  uint64_t seed;
  enum PitrendInitialTrend initial_trend;
  /**
   * Largest admissible `|log wealth|`; 0 selects the default.
   */
  double wealth_bound;
} PitrendSimConfig;

typedef struct PitrendStats {
  double mean_rate;
  double mean_rate_se;
  double var_rate;
  double var_rate_se;
  double sharpe;
  size_t n_paths;
  double horizon;
  double dt;
} PitrendStats;

/**
 * Values of one path at the horizon.
 */
typedef struct PitrendTerminal {
  double mu;
  double mu_hat;
  double log_wealth_full;
  double log_wealth_partial;
  double option_profile;
  double trading_impact;
} PitrendTerminal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *pitrend_status_message(enum PitrendStatus status);

/**
 * Validates `params`; writes nothing.
 *
 * # Safety
 * `params` must be null or point to a readable `PitrendParams`.
 */
enum PitrendStatus pitrend_params_validate(const struct PitrendParams *params);

/**
 * Parameters with `sigma_mu = sigma_s sqrt(2 lambda snr)` and a zero start.
 *
 * # Safety
 * `out` must be null or point to writable memory for a `PitrendParams`.
 */
enum PitrendStatus pitrend_params_from_snr(double snr,
                                           double lambda,
                                           double sigma_s,
                                           struct PitrendParams *out);

/**
 * Writes `beta` and `snr` of `params`; either out pointer may be null.
 *
 * # Safety
 * `params` must point to a readable `PitrendParams`; non-null out pointers
 * must be writable.
 */
enum PitrendStatus pitrend_beta_snr(const struct PitrendParams *params, double *beta, double *snr);

/**
 * Every closed-form quantity at `(lambda, snr, sigma_s)`.
 *
 * # Safety
 * `out` must be null or point to writable memory for a `PitrendAnalyticReport`.
 */
enum PitrendStatus pitrend_analytic_report(double lambda,
                                           double snr,
                                           double sigma_s,
                                           struct PitrendAnalyticReport *out);

/**
 * Mean and variance of the full-information log return over `[0, horizon]`.
 *
 * # Safety
 * `params` must point to a readable `PitrendParams`; `mean` and `variance`
 * must be writable.
 */
enum PitrendStatus pitrend_full_info_finite_t(const struct PitrendParams *params,
                                              double horizon,
                                              double *mean,
                                              double *variance);

/**
 * Mean and variance of the partial-information log return over
 * `[0, horizon]`. The variance is computed by adaptive quadrature.
 *
 * # Safety
 * As for [`pitrend_full_info_finite_t`].
 */
enum PitrendStatus pitrend_partial_info_finite_t(const struct PitrendParams *params,
                                                 double horizon,
                                                 double *mean,
                                                 double *variance);

/**
 * `Cov[muhat_s^2, muhat_t^2]`.
 *
 * # Safety
 * `params` must point to a readable `PitrendParams`; `out` must be writable.
 */
enum PitrendStatus pitrend_sq_filter_autocov(const struct PitrendParams *params,
                                             double s,
                                             double t,
                                             double *out);

/**
 * Simulates an ensemble and stores a new handle in `*out`. On failure
 * `*out` is set to null.
 *
 * # Safety
 * `config` must point to a readable `PitrendSimConfig`; `out` must be
 * writable.
 */
enum PitrendStatus pitrend_ensemble_simulate(const struct PitrendSimConfig *config,
                                             struct PitrendEnsemble **out);

/**
 * Number of paths in the ensemble, or 0 for a null handle.
 *
 * # Safety
 * `ensemble` must be null or a live handle.
 */
size_t pitrend_ensemble_n_paths(const struct PitrendEnsemble *ensemble);

/**
 * Annualized statistics of the terminal log returns of one strategy.
 *
 * # Safety
 * `ensemble` must be a live handle; `out` must be writable.
 */
enum PitrendStatus pitrend_ensemble_stats(const struct PitrendEnsemble *ensemble,
                                          enum PitrendStrategy strategy,
                                          struct PitrendStats *out);

/**
 * Horizon values of path `index`.
 *
 * # Safety
 * `ensemble` must be a live handle; `out` must be writable.
 */
enum PitrendStatus pitrend_ensemble_terminal(const struct PitrendEnsemble *ensemble,
                                             size_t index,
                                             struct PitrendTerminal *out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `ensemble` must be null or a handle from [`pitrend_ensemble_simulate`]
 * that has not been freed.
 */
void pitrend_ensemble_free(struct PitrendEnsemble *ensemble);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PITREND_H */
