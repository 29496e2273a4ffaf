//! `key=value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use the long
//! flag names with or without the leading dashes, and `_` and `-` are
//! interchangeable.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches('-').replace('_', "-").to_ascii_lowercase()
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
            entries.insert(normalize(k), v.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    /// Command-line value if given, otherwise the file value, otherwise `None`.
    pub fn pick<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| CliError::Param {
                field: key.to_string(),
                message: format!("invalid value `{v}`: {e}"),
            }),
        }
    }

    pub fn pick_or<T>(&self, cli: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.pick(cli, key)?.unwrap_or(default))
    }
}

/// A positive real that may be written as a fraction, e.g. `1/252`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl FromStr for Real {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
        match s.split_once('/') {
            Some((num, den)) => Ok(Real(parse(num)? / parse(den)?)),
            None => Ok(Real(parse(s)?)),
        }
    }
}
