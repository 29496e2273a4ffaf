//! Grid evaluation of the closed forms, written as CSV.

use std::io::Write;
use std::str::FromStr;

use super::format::fmt_float;
use super::CliError;
use crate::analytics::{
    full_info_sharpe, partial_info_mean_rate, partial_info_sharpe, partial_info_var_rate, pif, Variant,
};
use crate::model::params_from_snr;

pub const CSV_HEADER: &str = "lambda,snr,sr_full_paper,sr_full_corrected,sr_partial,pif_paper,pif_corrected,mean_rate_partial,var_rate_partial,optimal_lambda_flag";

/// A list of grid values, written either as `a,b,c` or as `start:stop:count`
/// (inclusive, evenly spaced).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, stop, count] => {
                let n: usize = count.trim().parse().map_err(|e| format!("`{count}`: {e}"))?;
                Ok(Grid(linspace(num(start)?, num(stop)?, n)))
            }
            [_] => s.split(',').map(num).collect::<Result<_, _>>().map(Grid),
            _ => Err(format!("`{s}`: expected a,b,c or start:stop:count")),
        }
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let m = (n - 1) as f64;
            (0..n).map(|i| (a * (m - i as f64) + b * i as f64) / m).collect()
        }
    }
}

fn hundredths(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub lambda_grid: Vec<f64>,
    pub snr_grid: Vec<f64>,
    pub sigma_s: f64,
    /// Selects the full-information Sharpe and PIF quoted in the summary;
    /// the CSV always carries both variants.
    pub variant: Variant,
}

impl SweepSpec {
    /// Default grids for figures 1 to 5.
    pub fn figure(id: u8) -> Result<Self, CliError> {
        let (lambda_grid, snr_grid) = match id {
            1 => (vec![1.0], (1..=200).map(|k| (2 * k) as f64 / 200.0).collect()),
            2 | 3 => ((1..=252).map(|k| k as f64).collect(), hundredths(100)),
            4 | 5 => (linspace(0.01, 2.0, 201), hundredths(100)),
            _ => {
                return Err(CliError::Param {
                    field: "figure".into(),
                    message: format!("expected 1 to 5, got {id}"),
                })
            }
        };
        Ok(SweepSpec {
            lambda_grid,
            snr_grid,
            sigma_s: 1.0,
            variant: Variant::Paper,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        fn check(grid: &[f64], field: &str) -> Result<(), CliError> {
            let bad = |message: String| CliError::Param {
                field: field.into(),
                message,
            };
            if grid.is_empty() {
                return Err(bad("grid is empty".into()));
            }
            if let Some(x) = grid.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(bad(format!("grid values must be positive, got {x}")));
            }
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(bad("grid must be strictly increasing".into()));
            }
            Ok(())
        }
        check(&self.lambda_grid, "lambda-grid")?;
        check(&self.snr_grid, "snr-grid")?;
        params_from_snr(self.snr_grid[0], self.lambda_grid[0], self.sigma_s).map_err(CliError::from)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub snr: f64,
    pub sr_full_paper: f64,
    pub sr_full_corrected: f64,
    pub sr_partial: f64,
    pub pif_paper: f64,
    pub pif_corrected: f64,
    pub mean_rate_partial: f64,
    pub var_rate_partial: f64,
    /// `lambda` is the grid point nearest `2 snr / 3` in this `snr` row.
    pub optimal_lambda_flag: bool,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let cols = [
            self.lambda,
            self.snr,
            self.sr_full_paper,
            self.sr_full_corrected,
            self.sr_partial,
            self.pif_paper,
            self.pif_corrected,
            self.mean_rate_partial,
            self.var_rate_partial,
        ];
        let mut line: Vec<String> = cols.iter().map(|&x| fmt_float(x)).collect();
        line.push(if self.optimal_lambda_flag { "1" } else { "0" }.into());
        line.join(",")
    }
}

fn nearest_index(grid: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, x) in grid.iter().enumerate() {
        if (x - target).abs() < (grid[best] - target).abs() {
            best = i;
        }
    }
    best
}

/// Rows ordered by `snr`, then `lambda`.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.lambda_grid.len() * spec.snr_grid.len());
    for &snr in &spec.snr_grid {
        let best = nearest_index(&spec.lambda_grid, 2.0 * snr / 3.0);
        for (i, &lambda) in spec.lambda_grid.iter().enumerate() {
            rows.push(SweepRow {
                lambda,
                snr,
                sr_full_paper: full_info_sharpe(snr, lambda, Variant::Paper),
                sr_full_corrected: full_info_sharpe(snr, lambda, Variant::Corrected),
                sr_partial: partial_info_sharpe(snr, lambda),
                pif_paper: pif(snr, lambda, Variant::Paper),
                pif_corrected: pif(snr, lambda, Variant::Corrected),
                mean_rate_partial: partial_info_mean_rate(snr, lambda),
                var_rate_partial: partial_info_var_rate(snr, lambda),
                optimal_lambda_flag: i == best,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[SweepRow], out: &mut dyn Write) -> std::io::Result<()> {
    let mut text = String::with_capacity(rows.len() * 120);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row.to_csv());
        text.push('\n');
    }
    out.write_all(text.as_bytes())
}

/// One-paragraph description of the sweep for the terminal.
pub fn summary(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let v = spec.variant;
    let pick = |r: &SweepRow| match v {
        Variant::Paper => (r.sr_full_paper, r.pif_paper),
        Variant::Corrected => (r.sr_full_corrected, r.pif_corrected),
    };
    let max_by = |f: &dyn Fn(&SweepRow) -> f64| {
        rows.iter().copied().fold(None::<SweepRow>, |best, r| match best {
            Some(b) if f(&b) >= f(&r) => Some(b),
            _ => Some(r),
        })
    };
    let mut s = format!("rows={}\nvariant={v}\n", rows.len());
    if let Some(r) = max_by(&|r| r.sr_partial) {
        s += &format!(
            "max_sr_partial={} at lambda={} snr={}\n",
            fmt_float(r.sr_partial),
            fmt_float(r.lambda),
            fmt_float(r.snr)
        );
    }
    if let Some(r) = max_by(&|r| pick(r).1) {
        s += &format!(
            "max_pif={} at lambda={} snr={}\n",
            fmt_float(pick(&r).1),
            fmt_float(r.lambda),
            fmt_float(r.snr)
        );
    }
    if let Some(r) = max_by(&|r| pick(r).0) {
        s += &format!("max_sr_full={}\n", fmt_float(pick(&r).0));
    }
    s
}
