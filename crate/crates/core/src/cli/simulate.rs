//! `simulate`: one Monte Carlo run, summarized as key=value text.

use std::io::Write;
use std::path::PathBuf;

use super::format::{fmt_float, kv};
use super::CliError;
use crate::sim::{mc_stats, simulate_ensemble, Ensemble, SimConfig, Strategy};

pub const PATH_CSV_HEADER: &str = "path_id,log_return_full,log_return_partial,option_profile,trading_impact";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateOptions {
    pub config: SimConfig,
    /// Per-path terminal values are written here when set.
    pub paths_out: Option<PathBuf>,
}

pub fn write_path_csv(ensemble: &Ensemble, out: &mut dyn Write) -> std::io::Result<()> {
    let mut text = String::with_capacity(ensemble.n_paths() * 80);
    text.push_str(PATH_CSV_HEADER);
    text.push('\n');
    for (i, p) in ensemble.summaries.iter().enumerate() {
        let t = p.terminal();
        text.push_str(&format!(
            "{i},{},{},{},{}\n",
            fmt_float(t.log_wealth_full),
            fmt_float(t.log_wealth_partial),
            fmt_float(t.option_profile),
            fmt_float(t.trading_impact)
        ));
    }
    out.write_all(text.as_bytes())
}

pub fn stats_block(ensemble: &Ensemble) -> Result<String, CliError> {
    let cfg = &ensemble.config;
    let p = &cfg.params;
    let mut lines = vec![
        kv("lambda", p.lambda()),
        kv("snr", p.snr()),
        kv("sigma_s", p.sigma_s()),
        kv("horizon", cfg.horizon),
        kv("dt", cfg.dt),
        format!("n_paths={}", cfg.n_paths),
        format!("seed={}", cfg.seed),
        format!("initial_trend={}", cfg.initial_trend),
    ];
    for strategy in [Strategy::Full, Strategy::Partial] {
        let stats = mc_stats(ensemble, strategy)?;
        for (key, value) in stats.fields().iter().take(5) {
            lines.push(kv(&format!("{}.{key}", strategy.name()), *value));
        }
    }
    Ok(lines.join("\n") + "\n")
}

pub fn run_simulate(opts: &SimulateOptions, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ensemble = simulate_ensemble(&opts.config)?;
    stdout.write_all(stats_block(&ensemble)?.as_bytes()).map_err(CliError::stdout)?;
    if let Some(path) = &opts.paths_out {
        let mut file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        write_path_csv(&ensemble, &mut file).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}
