//! Commands behind the `pitrend` binary.
//!
//! Exit codes: 0 on success, 1 when `validate` finds a failing check, 2 on
//! usage, parameter or I/O errors.

pub mod config;
pub mod format;
pub mod simulate;
pub mod sweep;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analytics::{AnalyticReport, AnalyticsError, Variant};
use crate::model::{params_from_snr, ModelParams, ParamError};
use crate::sim::{InitialTrend, SimConfig, SimError, DEFAULT_DT};
use config::{ConfigFile, Real};
use format::kv;
use simulate::SimulateOptions;
use sweep::{Grid, SweepSpec};
use validate::ValidateOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid {field}: {message}")]
    Param { field: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Sim(SimError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn stdout(source: std::io::Error) -> Self {
        CliError::Io {
            path: "<stdout>".into(),
            source,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Param {
            field: e.field().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Param(p) => p.into(),
            SimError::Analytics(a) => a.into(),
            other => CliError::Sim(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pitrend", version, about = "Trend-following under partial information: closed forms, Monte Carlo checks and sweep data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every closed-form quantity at one point.
    Analytic(AnalyticArgs),
    /// Evaluate the closed forms over a (lambda, snr) grid and write CSV.
    Sweep(SweepArgs),
    /// Run the Monte Carlo validation campaigns.
    Validate(ValidateArgs),
    /// Simulate an ensemble and print its statistics.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Mean-reversion speed, per year [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Signal-to-noise ratio, per year [default: 1.5]
    #[arg(long, allow_negative_numbers = true)]
    pub snr: Option<f64>,
    /// Price volatility [default: 1]
    #[arg(long = "sigma-s", allow_negative_numbers = true)]
    pub sigma_s: Option<f64>,
}

impl PointArgs {
    fn resolve(&self, file: &ConfigFile) -> Result<(f64, f64, f64), CliError> {
        Ok((
            file.pick_or(self.lambda, "lambda", 1.0)?,
            file.pick_or(self.snr, "snr", 1.5)?,
            file.pick_or(self.sigma_s, "sigma-s", 1.0)?,
        ))
    }

    fn params(&self, file: &ConfigFile) -> Result<ModelParams, CliError> {
        let (lambda, snr, sigma_s) = self.resolve(file)?;
        Ok(params_from_snr(snr, lambda, sigma_s)?)
    }
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// `paper` or `corrected` [default: paper]
    #[arg(long)]
    pub variant: Option<Variant>,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file supplying any of the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Use the default grids of figure 1 to 5.
    #[arg(long)]
    pub figure: Option<u8>,
    /// `a,b,c` or `start:stop:count`; overrides the figure grid.
    #[arg(long = "lambda-grid")]
    pub lambda_grid: Option<Grid>,
    /// `a,b,c` or `start:stop:count`; overrides the figure grid.
    #[arg(long = "snr-grid")]
    pub snr_grid: Option<Grid>,
    /// Price volatility [default: 1]; no CSV column depends on it.
    #[arg(long = "sigma-s")]
    pub sigma_s: Option<f64>,
    /// Variant quoted in the summary [default: paper]
    #[arg(long)]
    pub variant: Option<Variant>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Paths for every campaign (defaults: 20000 at T = 100, 100000 otherwise).
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Report destination [default: validation_report.txt]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Horizon in years [default: 1]
    #[arg(long)]
    pub horizon: Option<Real>,
    /// Step in years, e.g. `0.001` or `1/252` [default: 1/252]
    #[arg(long)]
    pub dt: Option<Real>,
    /// Number of paths [default: 1000]
    #[arg(long)]
    pub paths: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// `fixed`, `prior` or `stationary` [default: fixed]
    #[arg(long = "initial-trend")]
    pub initial_trend: Option<InitialTrend>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Per-path CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile, CliError> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError>
where
    T: Send,
{
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Param {
            field: "threads".into(),
            message: "must be at least 1".into(),
        }),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Rendered analytic report.
pub fn analytic_text(report: &AnalyticReport, variant: Variant) -> String {
    let mut lines: Vec<String> = report.fields().iter().map(|(k, v)| kv(k, *v)).collect();
    lines.push(format!("variant={variant}"));
    lines.push(kv("full_var_rate", report.full_var_rate(variant)));
    lines.push(kv("full_sharpe", report.full_sharpe(variant)));
    lines.push(kv("pif", report.pif(variant)));
    lines.join("\n") + "\n"
}

pub fn cmd_analytic(args: &AnalyticArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let file = load_config(&args.config)?;
    let params = args.point.params(&file)?;
    let variant = file.pick_or(args.variant, "variant", Variant::Paper)?;
    let text = analytic_text(&AnalyticReport::from_params(&params), variant);
    stdout.write_all(text.as_bytes()).map_err(CliError::stdout)?;
    if let Some(path) = file.pick(args.out.clone(), "out")? {
        write_file(&path, &text)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let file = load_config(&args.config)?;
    let figure = file.pick(args.figure, "figure")?;
    let lambda_grid = file.pick(args.lambda_grid.clone(), "lambda-grid")?;
    let snr_grid = file.pick(args.snr_grid.clone(), "snr-grid")?;
    let mut spec = match (figure, &lambda_grid, &snr_grid) {
        (Some(id), _, _) => SweepSpec::figure(id)?,
        (None, Some(_), Some(_)) => SweepSpec {
            lambda_grid: Vec::new(),
            snr_grid: Vec::new(),
            sigma_s: 1.0,
            variant: Variant::Paper,
        },
        _ => return Err(CliError::Usage("sweep needs --figure or both --lambda-grid and --snr-grid".into())),
    };
    if let Some(Grid(g)) = lambda_grid {
        spec.lambda_grid = g;
    }
    if let Some(Grid(g)) = snr_grid {
        spec.snr_grid = g;
    }
    spec.sigma_s = file.pick_or(args.sigma_s, "sigma-s", 1.0)?;
    spec.variant = file.pick_or(args.variant, "variant", Variant::Paper)?;
    let rows = sweep::sweep_rows(&spec)?;
    match file.pick(args.out.clone(), "out")? {
        Some(path) => {
            let mut f = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
            sweep::write_csv(&rows, &mut f).map_err(|e| CliError::io(&path, e))?;
            let text = format!("wrote {}\n{}", path.display(), sweep::summary(&spec, &rows));
            stdout.write_all(text.as_bytes()).map_err(CliError::stdout)?;
        }
        None => sweep::write_csv(&rows, stdout).map_err(CliError::stdout)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let file = load_config(&args.config)?;
    let mut opts = ValidateOptions {
        seed: file.pick_or(args.seed, "seed", validate::DEFAULT_SEED)?,
        ..ValidateOptions::default()
    };
    if let Some(n) = file.pick(args.paths, "paths")? {
        opts = opts.with_paths(n);
    }
    let threads = file.pick(args.threads, "threads")?;
    let out = file.pick_or(args.out.clone(), "out", PathBuf::from("validation_report.txt"))?;
    let report = with_threads(threads, || validate::run_validation(&opts))??;
    write_file(&out, &report.to_document())?;
    let text = format!("{}report written to {}\n", report.summary(), out.display());
    stdout.write_all(text.as_bytes()).map_err(CliError::stdout)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn simulate_options(args: &SimulateArgs) -> Result<(SimulateOptions, Option<usize>), CliError> {
    let file = load_config(&args.config)?;
    let params = args.point.params(&file)?;
    let horizon = file.pick_or(args.horizon, "horizon", Real(1.0))?.0;
    let dt = file.pick_or(args.dt, "dt", Real(DEFAULT_DT))?.0;
    let n_paths = file.pick_or(args.paths, "paths", 1000)?;
    let seed = file.pick_or(args.seed, "seed", 0)?;
    let initial = file.pick_or(args.initial_trend, "initial-trend", InitialTrend::Fixed)?;
    let config = SimConfig::new(params, horizon, n_paths, seed)
        .with_dt(dt)
        .with_initial_trend(initial);
    let opts = SimulateOptions {
        config,
        paths_out: file.pick(args.out.clone(), "out")?,
    };
    Ok((opts, file.pick(args.threads, "threads")?))
}

pub fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (opts, threads) = simulate_options(args)?;
    let mut buf = Vec::new();
    with_threads(threads, || simulate::run_simulate(&opts, &mut buf))??;
    stdout.write_all(&buf).map_err(CliError::stdout)?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Analytic(a) => cmd_analytic(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout),
        Command::Simulate(a) => cmd_simulate(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["pitrend"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn analytic_defaults() {
        let (code, out, _) = run_capture(&["analytic"]);
        assert_eq!(code, 0);
        assert!(out.contains("partial_sharpe=0.235702260\n") || out.contains("partial_sharpe=0.23570226\n"));
        assert!(out.contains("pif=0.384900179\n"));
    }

    #[test]
    fn analytic_corrected() {
        let (code, out, _) = run_capture(&["analytic", "--variant", "corrected"]);
        assert_eq!(code, 0);
        assert!(out.contains("full_sharpe=0.462910050\n") || out.contains("full_sharpe=0.46291005\n"));
    }

    #[test]
    fn bad_parameters_name_the_field() {
        let (code, _, err) = run_capture(&["analytic", "--lambda", "-1"]);
        assert_eq!(code, 2);
        assert!(err.contains("lambda"), "{err}");
        let (code, _, err) = run_capture(&["simulate", "--sigma-s", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("sigma_s"), "{err}");
        let (code, _, _) = run_capture(&["analytic", "--variant", "other"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn simulate_rejects_unstable_step() {
        let (code, _, err) = run_capture(&["simulate", "--lambda", "252", "--snr", "1", "--dt", "1/252"]);
        assert_eq!(code, 2);
        assert!(err.contains("stability"), "{err}");
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        std::fs::write(&cfg, "lambda=2\nsnr=1\nvariant=corrected\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let (_, out, _) = run_capture(&["analytic", "--config", cfg]);
        assert!(out.starts_with("lambda=2\nsnr=1\n"), "{out}");
        assert!(out.contains("variant=corrected"));
        let (_, out, _) = run_capture(&["analytic", "--config", cfg, "--lambda", "3"]);
        assert!(out.starts_with("lambda=3\n"));
        let (code, _, err) = run_capture(&["analytic", "--config", "/nonexistent/x.conf"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/x.conf"));
    }

    #[test]
    fn sweep_needs_grids() {
        let (code, _, _) = run_capture(&["sweep"]);
        assert_eq!(code, 2);
        let (code, out, _) = run_capture(&["sweep", "--lambda-grid", "1,2", "--snr-grid", "0.5:1.5:3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 7);
        let (code, _, err) = run_capture(&["sweep", "--lambda-grid", "2,1", "--snr-grid", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("lambda-grid"));
    }
}
