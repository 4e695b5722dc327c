//! Spectrum sources: inline lists, files and family descriptors.

use std::path::Path;

use serde_json::Value;
use weylkit_core::families::Family;
use weylkit_core::spectra::is_nonincreasing;
use weylkit_core::weight::parse_rational;
use weylkit_core::{Rational, Spectrum};

use crate::error::{CliError, CliResult};
use crate::format::{json_values, parse_f64};

/// Where a spectrum comes from, before it is parsed into a scalar type.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Weights as decimal or `p/q` text.
    Values(Vec<String>),
    Uniform { k: usize, d: usize },
    Chi { q: String, d: usize },
    Boltzmann { n: usize, k: usize },
}

/// Splits an inline list on commas and whitespace.
pub fn split_list(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::to_string).collect()
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// A file holds either a JSON array or a plain list.
pub fn values_from_file(path: &Path) -> CliResult<Vec<String>> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        json_values(&v)
    } else {
        Ok(split_list(&text))
    }
}

impl Source {
    pub fn inline(text: &str) -> CliResult<Self> {
        let values = split_list(text);
        if values.is_empty() {
            return Err(CliError::Parse(format!("empty spectrum '{text}'")));
        }
        Ok(Source::Values(values))
    }

    pub fn file(path: &Path) -> CliResult<Self> {
        Ok(Source::Values(values_from_file(path)?))
    }

    /// Whether the given values were already nonincreasing (family members always are).
    pub fn was_sorted(&self) -> CliResult<bool> {
        match self {
            Source::Values(v) => {
                let x = v.iter().map(|t| parse_f64(t)).collect::<CliResult<Vec<_>>>()?;
                Ok(is_nonincreasing(&x))
            }
            _ => Ok(true),
        }
    }

    pub fn to_f64(&self, normalize: bool) -> CliResult<Spectrum> {
        match self {
            Source::Values(v) => {
                let x = v.iter().map(|t| parse_f64(t)).collect::<CliResult<Vec<_>>>()?;
                Ok(Spectrum::new(&x, normalize)?)
            }
            Source::Uniform { k, d } => Ok(Family::<f64>::Uniform { k: *k, d: *d }.spectrum()?),
            Source::Chi { q, d } => Ok(Family::DepolarizedPure { q: parse_f64(q)?, d: *d }.spectrum()?),
            Source::Boltzmann { n, k } => Ok(Family::<f64>::Boltzmann { n: *n, k: *k }.spectrum()?),
        }
    }

    pub fn to_exact(&self, normalize: bool) -> CliResult<Spectrum<Rational>> {
        match self {
            Source::Values(v) => {
                for t in v {
                    parse_rational(t).map_err(|_| CliError::Parse(format!("not a number: '{t}'")))?;
                }
                Ok(Spectrum::parse(v, normalize)?)
            }
            Source::Uniform { k, d } => Ok(Family::<Rational>::Uniform { k: *k, d: *d }.spectrum()?),
            Source::Chi { q, d } => Ok(Family::DepolarizedPure { q: parse_rational(q)?, d: *d }.spectrum()?),
            Source::Boltzmann { n, k } => Ok(Family::<Rational>::Boltzmann { n: *n, k: *k }.spectrum()?),
        }
    }
}
