//! Flat `key = value` configuration: defaults, then a config file, then flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use shiftlab::Rational;

use crate::error::{CliError, CliResult};

/// A parameter an experiment accepts, with its default.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn new(name: &'static str, default: &'static str, help: &'static str) -> Self {
        Self { name, default, help }
    }
}

/// Resolved parameters of one run. Keys iterate in sorted order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Config(format!("config line {}: empty key", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

impl Config {
    /// Layers `defaults < file < flags`, rejecting keys not in `known`.
    pub fn resolve(
        specs: &[ParamSpec],
        globals: &[ParamSpec],
        file: Option<&Path>,
        flags: &BTreeMap<String, String>,
    ) -> CliResult<Self> {
        let mut values: BTreeMap<String, String> = specs
            .iter()
            .chain(globals)
            .map(|p| (p.name.to_string(), p.default.to_string()))
            .collect();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            for (k, v) in parse_config_file(&text)? {
                if !values.contains_key(&k) {
                    return Err(CliError::Config(format!("unknown config key {k:?}")));
                }
                values.insert(k, v);
            }
        }
        for (k, v) in flags {
            values.insert(k.clone(), v.clone());
        }
        Ok(Self { values })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self {
            values: pairs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    pub fn raw(&self, key: &str) -> CliResult<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Config(format!("missing parameter {key}")))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|e| CliError::Config(format!("--{key} {raw:?}: {e}")))
    }

    /// Reals accept scientific notation such as `1e5`.
    pub fn f64(&self, key: &str) -> CliResult<f64> {
        let v: f64 = self.get(key)?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("--{key} must be finite")));
        }
        Ok(v)
    }

    /// Nonnegative integers also accept exact scientific notation such as `1e5`.
    pub fn u64(&self, key: &str) -> CliResult<u64> {
        let raw = self.raw(key)?;
        if let Ok(v) = raw.parse::<u64>() {
            return Ok(v);
        }
        let v: f64 = raw
            .parse()
            .map_err(|_| CliError::Config(format!("--{key} {raw:?} is not a nonnegative integer")))?;
        if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 {
            Ok(v as u64)
        } else {
            Err(CliError::Config(format!("--{key} {raw:?} is not a nonnegative integer")))
        }
    }

    pub fn u32(&self, key: &str) -> CliResult<u32> {
        let v = self.u64(key)?;
        u32::try_from(v).map_err(|_| CliError::Scale(format!("--{key} {v} is too large")))
    }

    pub fn usize(&self, key: &str) -> CliResult<usize> {
        let v = self.u64(key)?;
        usize::try_from(v).map_err(|_| CliError::Scale(format!("--{key} {v} is too large")))
    }

    /// Comma-separated list; empty means none.
    pub fn list<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> CliResult<Vec<T>> {
        let raw = self.raw(key)?.trim();
        if raw.is_empty() || raw == "none" {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|s| parse(s.trim()).map_err(|e| CliError::Config(format!("--{key}: {e}"))))
            .collect()
    }

    pub fn rationals(&self, key: &str) -> CliResult<Vec<Rational>> {
        self.list(key, parse_rational)
    }

    pub fn f64s(&self, key: &str) -> CliResult<Vec<f64>> {
        self.list(key, |s| {
            let v: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("{s:?} is not finite"))
            }
        })
    }
}

/// `a/b`, an integer, or a finite decimal such as `-0.25`, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("{s:?} is not a rational number"));
        }
        let den = format!("1{}", "0".repeat(frac.len()));
        let r = Rational::from_str(&format!("{digits}/{den}"))
            .map_err(|_| format!("{s:?} is not a rational number"))?;
        return Ok(if negative { -r } else { r });
    }
    Rational::from_str(s).map_err(|_| format!("{s:?} is not a rational number"))
}
