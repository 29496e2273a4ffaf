//! `validate`: Monte Carlo campaigns and deterministic checks against the
//! closed forms, at the canonical point `lambda = 1, snr = 1.5, sigma_s = 1`.
//!
//! Three campaigns are run:
//!
//! * `long`: `T = 100`, daily steps, trend and filter started from their
//!   joint stationary law so that expected log returns grow at the
//!   asymptotic rates from time 0. Asymptotic rates.
//! * `prior`: `T = 3`, `dt = 1e-3`, trend started from the steady-state
//!   prior so that the filter is the exact conditional mean. Finite-horizon
//!   partial-information moments, the squared-filter covariance and the
//!   filter law.
//! * `short`: `T = 1`, `dt = 1e-3`, fixed start. Finite-horizon
//!   full-information mean.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::fmt_float;
use super::CliError;
use crate::analytics::finite::partial_variance_terms;
use crate::analytics::{
    asymptotic, filter_variance, full_info_finite_t, full_info_mean_rate, full_info_sharpe, full_info_var_rate,
    partial_info_finite_t_mean, partial_info_finite_t_var, partial_info_mean_rate, partial_info_sharpe,
    partial_info_var_rate, pif, profit_threshold, sq_filter_autocov, Variant, PIF_BOUND,
};
use crate::model::{params_from_snr, ModelParams};
use crate::sim::{
    discrete_expected_log_returns, filter_law_report, mc_stats, sample_covariance, sample_moments, simulate_ensemble, Ensemble, InitialTrend,
    SampleMoments, SimConfig, Strategy, ZScore,
};

/// Fewest paths any Monte Carlo check accepts.
pub const MIN_PATHS: usize = 1000;
pub const DEFAULT_LONG_PATHS: usize = 20_000;
pub const DEFAULT_SHORT_PATHS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 20_240_601;
const PRIOR_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    MonteCarlo,
    Deterministic,
}

/// Pass rule of a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `|z| <= k`.
    WithinSe(f64),
    /// `|z| >= k`.
    BeyondSe(f64),
    /// `|estimate / reference - 1| <= tol`.
    Relative(f64),
    /// `|estimate - reference| <= tol`.
    Absolute(f64),
    /// `estimate >= reference`.
    AtLeast,
}

impl Gate {
    fn label(&self) -> String {
        match self {
            Gate::WithinSe(k) => format!("abs_z<={}", fmt_float(*k)),
            Gate::BeyondSe(k) => format!("abs_z>={}", fmt_float(*k)),
            Gate::Relative(t) => format!("rel<={}", fmt_float(*t)),
            Gate::Absolute(t) => format!("abs<={}", fmt_float(*t)),
            Gate::AtLeast => "estimate>=reference".into(),
        }
    }

    fn passes(&self, reference: f64, estimate: f64, z: f64) -> bool {
        match *self {
            Gate::WithinSe(k) => z.abs() <= k,
            Gate::BeyondSe(k) => z.abs() >= k,
            Gate::Relative(t) => (estimate / reference - 1.0).abs() <= t,
            Gate::Absolute(t) => (estimate - reference).abs() <= t,
            Gate::AtLeast => estimate >= reference,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub kind: CheckKind,
    pub reference: f64,
    pub estimate: f64,
    /// Standard error of the estimate; `NaN` for deterministic checks.
    pub se: f64,
    pub z: f64,
    pub gate: Gate,
    pub passed: bool,
    pub note: &'static str,
}

impl CheckRecord {
    fn mc(name: &str, reference: f64, estimate: f64, se: f64, gate: Gate) -> Self {
        let z = (estimate - reference) / se;
        CheckRecord {
            name: name.into(),
            kind: CheckKind::MonteCarlo,
            reference,
            estimate,
            se,
            z,
            gate,
            passed: gate.passes(reference, estimate, z),
            note: "",
        }
    }

    fn exact(name: &str, reference: f64, estimate: f64, gate: Gate, extra: bool) -> Self {
        CheckRecord {
            name: name.into(),
            kind: CheckKind::Deterministic,
            reference,
            estimate,
            se: f64::NAN,
            z: f64::NAN,
            gate,
            passed: extra && gate.passes(reference, estimate, f64::NAN),
            note: "",
        }
    }

    fn from_z(name: &str, z: &ZScore) -> Self {
        Self::mc(name, z.expected, z.estimate, z.se, Gate::WithinSe(3.0))
    }

    fn underpowered(name: &str, reference: f64, gate: Gate) -> Self {
        CheckRecord {
            name: name.into(),
            kind: CheckKind::MonteCarlo,
            reference,
            estimate: f64::NAN,
            se: f64::NAN,
            z: f64::NAN,
            gate,
            passed: false,
            note: "insufficient_paths",
        }
    }

    fn with_note(mut self, note: &'static str) -> Self {
        self.note = note;
        self
    }

    /// One line of the report document.
    pub fn to_line(&self) -> String {
        let kind = match self.kind {
            CheckKind::MonteCarlo => "mc",
            CheckKind::Deterministic => "exact",
        };
        let mut s = format!(
            "check={} kind={kind} reference={} estimate={} se={} z={} gate={} pass={}",
            self.name,
            fmt_float(self.reference),
            fmt_float(self.estimate),
            fmt_float(self.se),
            fmt_float(self.z),
            self.gate.label(),
            u8::from(self.passed)
        );
        if !self.note.is_empty() {
            s += &format!(" note={}", self.note);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Paths for the `T = 100` campaign.
    pub long_paths: usize,
    /// Paths for the `T = 1` and `T = 3` campaigns.
    pub short_paths: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: DEFAULT_SEED,
            long_paths: DEFAULT_LONG_PATHS,
            short_paths: DEFAULT_SHORT_PATHS,
        }
    }
}

impl ValidateOptions {
    /// Same path count for every campaign.
    pub fn with_paths(mut self, n: usize) -> Self {
        self.long_paths = n;
        self.short_paths = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub options: ValidateOptions,
    pub records: Vec<CheckRecord>,
    /// Wall-clock seconds; shown in the summary but kept out of the document.
    pub runtime_secs: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Machine-readable document: header lines then one line per check.
    pub fn to_document(&self) -> String {
        let o = &self.options;
        let mut s = format!(
            "seed={}\nlong_paths={}\nshort_paths={}\n",
            o.seed, o.long_paths, o.short_paths
        );
        for r in &self.records {
            s += &r.to_line();
            s.push('\n');
        }
        let failed = self.records.iter().filter(|r| !r.passed).count();
        let _ = write!(s, "checks={}\nfailed={}\n", self.records.len(), failed);
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let _ = writeln!(
                s,
                "{} {:<34} estimate={:<14} reference={:<14} z={}{}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                fmt_float(r.estimate),
                fmt_float(r.reference),
                fmt_float(r.z),
                if r.note.is_empty() { String::new() } else { format!(" ({})", r.note) }
            );
        }
        let failed = self.records.iter().filter(|r| !r.passed).count();
        let _ = writeln!(
            s,
            "{} of {} checks passed in {:.1} s",
            self.records.len() - failed,
            self.records.len(),
            self.runtime_secs
        );
        s
    }
}

pub fn canonical_params() -> ModelParams {
    params_from_snr(1.5, 1.0, 1.0).expect("canonical point is valid")
}

fn campaign_seed(seed: u64, campaign: u64) -> u64 {
    seed.wrapping_add(campaign.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn values_at(ens: &Ensemble, t: f64, f: impl Fn(&crate::sim::Snapshot) -> f64) -> Vec<f64> {
    let idx = ens.snapshot_index(t).expect("campaign observes this time");
    ens.snapshots_at(idx).map(f).collect()
}

/// Names and gates of the `T = 100` campaign, with their references.
fn long_checks(p: &ModelParams) -> Vec<(&'static str, f64, Gate)> {
    let (snr, l) = (p.snr(), p.lambda());
    vec![
        ("full_mean_rate", full_info_mean_rate(snr), Gate::WithinSe(3.0)),
        ("full_var_rate_corrected", full_info_var_rate(snr, l, Variant::Corrected), Gate::Relative(0.05)),
        ("full_var_rate_rejects_paper", full_info_var_rate(snr, l, Variant::Paper), Gate::BeyondSe(10.0)),
        ("partial_mean_rate", partial_info_mean_rate(snr, l), Gate::WithinSe(3.0)),
        ("partial_var_rate", partial_info_var_rate(snr, l), Gate::Relative(0.05)),
        ("partial_sharpe", partial_info_sharpe(snr, l), Gate::Relative(0.05)),
        ("profit_condition_fraction", 0.99, Gate::AtLeast),
        ("decomposition_identity", 0.0, Gate::Absolute(1e-10)),
    ]
}

fn long_config(p: ModelParams, seed: u64, n: usize) -> SimConfig {
    SimConfig::new(p, 100.0, n, campaign_seed(seed, 1)).with_initial_trend(InitialTrend::Stationary)
}

fn long_campaign(seed: u64, n: usize) -> Result<Vec<CheckRecord>, CliError> {
    let p = canonical_params();
    let mut specs = long_checks(&p);
    if n < MIN_PATHS {
        let exact = discrete_expected_log_returns(&long_config(p, seed, 2))?;
        specs.push(("full_mean_rate_discrete", exact.full / 100.0, Gate::WithinSe(3.0)));
        specs.push(("partial_mean_rate_discrete", exact.partial / 100.0, Gate::WithinSe(3.0)));
        return Ok(specs.iter().map(|(name, r, g)| CheckRecord::underpowered(name, *r, *g)).collect());
    }
    let cfg = long_config(p, seed, n);
    let horizon = cfg.horizon;
    let ens = simulate_ensemble(&cfg)?;
    let full = mc_stats(&ens, Strategy::Full)?;
    let part = mc_stats(&ens, Strategy::Partial)?;

    // large-sample SE of a Sharpe estimate, annualized
    let sr_t = part.sharpe * horizon.sqrt();
    let sharpe_se = ((1.0 + 0.5 * sr_t * sr_t) / n as f64).sqrt() / horizon.sqrt();

    let threshold = profit_threshold(&p);
    let above = values_at(&ens, horizon, |s| s.mu_hat_sq_integral / horizon)
        .iter()
        .filter(|&&m| m > threshold)
        .count();
    let fraction = above as f64 / n as f64;
    let gap = values_at(&ens, horizon, |s| (s.log_wealth_partial - s.option_profile - s.trading_impact).abs())
        .into_iter()
        .fold(0.0, f64::max);

    let estimates = [
        (full.mean_rate, full.mean_rate_se),
        (full.var_rate, full.var_rate_se),
        (full.var_rate, full.var_rate_se),
        (part.mean_rate, part.mean_rate_se),
        (part.var_rate, part.var_rate_se),
        (part.sharpe, sharpe_se),
        (fraction, (fraction * (1.0 - fraction) / n as f64).sqrt()),
        (gap, f64::NAN),
    ];
    let mut records: Vec<CheckRecord> = specs
        .iter()
        .zip(estimates)
        .map(|((name, reference, gate), (est, se))| {
            let rec = CheckRecord::mc(name, *reference, est, se, *gate);
            if *name == "full_var_rate_rejects_paper" {
                rec.with_note("documented_discrepancy")
            } else {
                rec
            }
        })
        .collect();

    // same estimates against the exact expectation of the discrete scheme,
    // which includes the start-up transient and the time-step bias
    let exact = discrete_expected_log_returns(&cfg)?;
    records.push(
        CheckRecord::mc("full_mean_rate_discrete", exact.full / horizon, full.mean_rate, full.mean_rate_se, Gate::WithinSe(3.0))
            .with_note("diagnostic"),
    );
    records.push(
        CheckRecord::mc(
            "partial_mean_rate_discrete",
            exact.partial / horizon,
            part.mean_rate,
            part.mean_rate_se,
            Gate::WithinSe(3.0),
        )
        .with_note("diagnostic"),
    );
    Ok(records)
}

fn prior_checks(p: &ModelParams) -> Result<Vec<(&'static str, f64, Gate)>, CliError> {
    Ok(vec![
        ("partial_mean_t1", partial_info_finite_t_mean(1.0, p)?, Gate::WithinSe(3.0)),
        ("partial_var_t1", partial_info_finite_t_var(1.0, p)?, Gate::WithinSe(3.0)),
        ("sq_filter_autocov_2_3", sq_filter_autocov(2.0, 3.0, p)?, Gate::WithinSe(3.0)),
        ("filter_mean_t3", 0.0, Gate::WithinSe(3.0)),
        ("filter_variance_t3", filter_variance(3.0, p)?, Gate::WithinSe(3.0)),
        (
            "filter_lag_correlation_t3",
            (-p.lambda() * PRIOR_DT).exp() * (filter_variance(3.0 - PRIOR_DT, p)? / filter_variance(3.0, p)?).sqrt(),
            Gate::WithinSe(3.0),
        ),
    ])
}

fn prior_campaign(seed: u64, n: usize) -> Result<Vec<CheckRecord>, CliError> {
    let p = canonical_params();
    let specs = prior_checks(&p)?;
    if n < MIN_PATHS {
        return Ok(specs.iter().map(|(name, r, g)| CheckRecord::underpowered(name, *r, *g)).collect());
    }
    let dt = PRIOR_DT;
    let cfg = SimConfig::new(p, 3.0, n, campaign_seed(seed, 2))
        .with_dt(dt)
        .with_checkpoints(&[1.0, 2.0, 3.0 - dt])
        .with_initial_trend(InitialTrend::SteadyStatePrior);
    let ens = simulate_ensemble(&cfg)?;

    let at1: SampleMoments = sample_moments(&values_at(&ens, 1.0, |s| s.log_wealth_partial))?;
    let sq2 = values_at(&ens, 2.0, |s| s.mu_hat * s.mu_hat);
    let sq3 = values_at(&ens, 3.0, |s| s.mu_hat * s.mu_hat);
    let cov = sample_covariance(&sq2, &sq3)?;
    let law = filter_law_report(&ens, 3.0)?;

    Ok(vec![
        CheckRecord::mc(specs[0].0, specs[0].1, at1.mean, at1.mean_se, specs[0].2),
        CheckRecord::mc(specs[1].0, specs[1].1, at1.variance, at1.variance_se, specs[1].2),
        CheckRecord::mc(specs[2].0, specs[2].1, cov.covariance, cov.se, specs[2].2),
        CheckRecord::from_z(specs[3].0, &law.mean),
        CheckRecord::from_z(specs[4].0, &law.variance),
        CheckRecord::from_z(specs[5].0, &law.lag_correlation),
    ])
}

fn short_campaign(seed: u64, n: usize) -> Result<Vec<CheckRecord>, CliError> {
    let p = canonical_params();
    let reference = full_info_finite_t(1.0, &p)?.mean;
    let name = "full_mean_t1";
    if n < MIN_PATHS {
        return Ok(vec![CheckRecord::underpowered(name, reference, Gate::WithinSe(3.0))]);
    }
    let cfg = SimConfig::new(p, 1.0, n, campaign_seed(seed, 3)).with_dt(1e-3);
    let ens = simulate_ensemble(&cfg)?;
    let m = sample_moments(&values_at(&ens, 1.0, |s| s.log_wealth_full))?;
    Ok(vec![CheckRecord::mc(name, reference, m.mean, m.mean_se, Gate::WithinSe(3.0))])
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Closed-form checks that need no simulation.
pub fn deterministic_checks() -> Result<Vec<CheckRecord>, CliError> {
    let p = canonical_params();
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for k in 1..=100 {
        let t = 0.1 * k as f64;
        let v = filter_variance(t, &p)?;
        worst = worst.max(rel_err(sq_filter_autocov(t, t, &p)?, 2.0 * v * v));
    }
    out.push(CheckRecord::exact("sq_autocov_diagonal", 0.0, worst, Gate::Absolute(1e-12), true));

    let (mut best, mut at) = (0.0f64, (0.0, 0.0));
    for i in 1..=1000 {
        let lambda = 0.01 * i as f64;
        for j in 1..=500 {
            let snr = 0.01 * j as f64;
            let v = pif(snr, lambda, Variant::Paper);
            if v > best {
                best = v;
                at = (lambda, snr);
            }
        }
    }
    let on_ridge = (at.0 - 2.0 * at.1 / 3.0).abs() <= 0.01 + 1e-12;
    out.push(CheckRecord::exact("pif_grid_max", PIF_BOUND, best, Gate::Absolute(1e-6), on_ridge));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let snr = 10f64.powf(rng.gen_range(-3.0..1.0));
        let lambda = 10f64.powf(rng.gen_range(-2.0..2.5));
        let b = asymptotic::beta_minus_one(snr, lambda);
        worst = worst
            .max(rel_err(asymptotic::partial_info_mean_rate_beta(lambda, b), partial_info_mean_rate(snr, lambda)))
            .max(rel_err(asymptotic::partial_info_var_rate_beta(lambda, b), partial_info_var_rate(snr, lambda)))
            .max(rel_err(asymptotic::partial_info_sharpe_beta(lambda, b), partial_info_sharpe(snr, lambda)));
    }
    out.push(CheckRecord::exact("dual_forms", 0.0, worst, Gate::Absolute(1e-12), true));

    let mut unimodal = true;
    for &snr in &[0.3, 1.5, 4.0] {
        let grid: Vec<f64> = (1..=1000).map(|i| i as f64 * 0.01 * snr).collect();
        let diffs: Vec<f64> = grid
            .windows(2)
            .map(|w| partial_info_sharpe(snr, w[1]) - partial_info_sharpe(snr, w[0]))
            .collect();
        let changes: Vec<usize> = (1..diffs.len()).filter(|&i| (diffs[i - 1] > 0.0) != (diffs[i] > 0.0)).collect();
        let step = 0.01 * snr;
        unimodal &= changes.len() == 1 && (grid[changes[0]] - 2.0 * snr / 3.0).abs() <= step + 1e-12;
    }
    let mut worst_drop = 0.0f64;
    for &lambda in &[0.1, 1.0, 10.0] {
        let grid: Vec<f64> = (1..=1000).map(|i| i as f64 * 0.005).collect();
        for w in grid.windows(2) {
            worst_drop = worst_drop
                .min(partial_info_sharpe(w[1], lambda) - partial_info_sharpe(w[0], lambda))
                .min(partial_info_mean_rate(w[1], lambda) - partial_info_mean_rate(w[0], lambda));
        }
    }
    out.push(CheckRecord::exact("sharpe_unimodal_in_lambda", 1.0, f64::from(u8::from(unimodal)), Gate::AtLeast, true));
    out.push(CheckRecord::exact("monotone_in_snr", -1e-12, worst_drop, Gate::AtLeast, true));

    let t = 1e4;
    let full = full_info_finite_t(t, &p)?;
    out.push(CheckRecord::exact(
        "full_var_rate_isserlis_limit",
        full_info_var_rate(p.snr(), p.lambda(), Variant::Corrected),
        full.variance / t,
        Gate::Relative(1e-3),
        true,
    ));
    out.push(CheckRecord::exact(
        "full_sharpe_corrected",
        full_info_sharpe(p.snr(), p.lambda(), Variant::Corrected),
        (full.mean / t) / (full.variance / t).sqrt(),
        Gate::Relative(1e-3),
        true,
    ));

    let t = 100.0;
    let terms = partial_variance_terms(t, &p)?;
    let by_parts = terms.terminal_sq_var.is_finite() && terms.integral_var > 0.0;
    out.push(CheckRecord::exact(
        "partial_var_quadrature_t100",
        partial_info_var_rate(p.snr(), p.lambda()),
        partial_info_finite_t_var(t, &p)? / t,
        Gate::Relative(0.02),
        by_parts,
    ));
    Ok(out)
}

/// Runs every check.
pub fn run_validation(opts: &ValidateOptions) -> Result<ValidationReport, CliError> {
    let start = Instant::now();
    let mut records = deterministic_checks()?;
    records.extend(long_campaign(opts.seed, opts.long_paths)?);
    records.extend(prior_campaign(opts.seed, opts.short_paths)?);
    records.extend(short_campaign(opts.seed, opts.short_paths)?);
    Ok(ValidationReport {
        options: *opts,
        records,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}
