//! JSON and CSV encodings.
//!
//! Float spectra are JSON number arrays; exact spectra are arrays of `"p/q"`
//! strings. CSV numbers use 17 significant digits in exponent notation,
//! independent of locale.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use weylkit_core::entropies::{FProfile, NuGridConfig};
use weylkit_core::geometry::{HPolytope, InconvertibilityReport, VolumeResult};
use weylkit_core::measures::{Direction, MeasureReport, Party};
use weylkit_core::spectra::{ComparisonOutcome, Relation, Sign};
use weylkit_core::weight::{parse_rational, rational_to_string};
use weylkit_core::{Rational, Spectrum, Weight};

use crate::error::{CliError, CliResult};

/// Scalars with a JSON encoding: plain numbers for floats, `"p/q"` for rationals.
pub trait JsonScalar: Weight {
    fn to_json(&self) -> Value;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }
}

pub fn spectrum_json<T: JsonScalar>(s: &Spectrum<T>) -> Value {
    Value::Array(s.weights().iter().map(JsonScalar::to_json).collect())
}

/// Decimal text of each entry of a JSON array (numbers or strings).
pub fn json_values(v: &Value) -> CliResult<Vec<String>> {
    let arr = v.as_array().ok_or_else(|| CliError::Parse(format!("expected an array of weights, got {v}")))?;
    arr.iter()
        .map(|x| match x {
            Value::Number(n) => Ok(n.to_string()),
            Value::String(s) => Ok(s.trim().to_string()),
            other => Err(CliError::Parse(format!("not a weight: {other}"))),
        })
        .collect()
}

pub fn parse_f64(text: &str) -> CliResult<f64> {
    if let Ok(x) = text.parse::<f64>() {
        return Ok(x);
    }
    parse_rational(text).map(|q| q.to_f64_lossy()).map_err(|_| CliError::Parse(format!("not a number: '{text}'")))
}

pub fn spectrum_from_json_f64(v: &Value, normalize: bool) -> CliResult<Spectrum> {
    let values = json_values(v)?.iter().map(|t| parse_f64(t)).collect::<CliResult<Vec<_>>>()?;
    Ok(Spectrum::new(&values, normalize)?)
}

pub fn spectrum_from_json_exact(v: &Value, normalize: bool) -> CliResult<Spectrum<Rational>> {
    Ok(Spectrum::parse(&json_values(v)?, normalize)?)
}

pub fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Equal => "Equal",
        Relation::Majorizes => "Majorizes",
        Relation::MajorizedBy => "MajorizedBy",
        Relation::Incomparable => "Incomparable",
    }
}

pub fn outcome_json(o: &ComparisonOutcome) -> Value {
    json!({
        "relation": relation_name(o.relation),
        "exact": o.exact,
        "signs": o.sign_string(),
        "inversion_rank": o.inversion_rank(),
        "inversion_indices": o.inversion_indices,
    })
}

fn party_name(p: Party) -> &'static str {
    match p {
        Party::First => "r",
        Party::Second => "s",
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Ascending => "ascending",
        Direction::Descending => "descending",
    }
}

/// `{measure, value, optimizer, direction, method}`; `direction` names the
/// spectrum that was moved and, for cone projections, which cone it was moved into.
pub fn measure_json(rep: &MeasureReport) -> Value {
    json!({
        "measure": rep.measure.name(),
        "value": rep.value,
        "optimizer": spectrum_json(&rep.optimizer),
        "direction": {
            "moved": party_name(rep.moved),
            "cone": rep.direction.map(direction_name),
        },
        "method": rep.method,
    })
}

pub fn polytope_json<T: JsonScalar>(p: &HPolytope<T>) -> Value {
    json!({
        "dim": p.dim,
        "inequalities": p.inequalities.iter().map(|ineq| json!({
            "coeffs": ineq.coeffs.iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
            "offset": ineq.offset.to_json(),
        })).collect::<Vec<_>>(),
    })
}

pub fn volume_json(v: &VolumeResult) -> Value {
    let mut out = json!({ "value": v.value });
    if let Some(q) = &v.exact {
        out["exact"] = q.to_json();
    }
    if let Some(se) = v.stderr {
        out["stderr"] = json!(se);
    }
    out
}

pub fn inconvertibility_json(rep: &InconvertibilityReport) -> Value {
    json!({
        "C": volume_json(&rep.c),
        "E": volume_json(&rep.e),
        "H": volume_json(&rep.h),
        "method": rep.c.method(),
        "samples": rep.c.samples,
        "seed": rep.c.seed,
    })
}

pub fn sign_symbol(s: Sign) -> String {
    s.symbol().to_string()
}

/// A ν-grid block: `{min, max, count, log_tail_max}`, optionally `tail_count`.
/// Missing keys keep their defaults.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log_tail_max: f64,
    pub tail_count: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        NuGridConfig::default().into()
    }
}

impl From<NuGridConfig> for GridConfig {
    fn from(g: NuGridConfig) -> Self {
        Self { min: g.min, max: g.max, count: g.count, log_tail_max: g.log_tail_max, tail_count: g.tail_count }
    }
}

impl From<GridConfig> for NuGridConfig {
    fn from(g: GridConfig) -> Self {
        Self { min: g.min, max: g.max, count: g.count, log_tail_max: g.log_tail_max, tail_count: g.tail_count }
    }
}

pub fn grid_from_json(text: &str) -> CliResult<NuGridConfig> {
    let g: GridConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("grid config: {e}")))?;
    if g.min.partial_cmp(&g.max) != Some(std::cmp::Ordering::Less) || g.count == 0 {
        return Err(CliError::Parse(format!("grid config: need min < max and count > 0, got {g:?}")));
    }
    Ok(g.into())
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Minimal CSV table: fields never contain separators, so no quoting.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Self::default();
        c.row(header.iter().map(|s| s.to_string()));
        c
    }

    pub fn row(&mut self, fields: impl IntoIterator<Item = String>) {
        let mut first = true;
        for f in fields {
            if !first {
                self.out.push(',');
            }
            first = false;
            self.out.push_str(&f);
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Columns `nu, f_source, f_target, F`.
pub fn profile_csv(p: &FProfile) -> String {
    let mut csv = Csv::new(&["nu", "f_source", "f_target", "F"]);
    for i in 0..p.nu.len() {
        csv.row([fmt_f64(p.nu[i]), fmt_f64(p.f_source[i]), fmt_f64(p.f_target[i]), fmt_f64(p.values[i])]);
    }
    csv.finish()
}

/// Columns `j, x` and one Lorenz ordinate per spectrum (zero-padded to a common dimension).
pub fn lorenz_csv(spectra: &[(&str, &Spectrum)]) -> String {
    let d = spectra.iter().map(|(_, s)| s.dim()).max().unwrap_or(0);
    let mut header = vec!["j", "x"];
    header.extend(spectra.iter().map(|(name, _)| *name));
    let curves: Vec<Vec<(f64, f64)>> = spectra.iter().map(|(_, s)| s.padded(d).lorenz()).collect();
    let mut csv = Csv::new(&header);
    for j in 0..=d {
        let mut row = vec![j.to_string(), fmt_f64(j as f64 / d as f64)];
        row.extend(curves.iter().map(|c| fmt_f64(c[j].1)));
        csv.row(row);
    }
    csv.finish()
}

pub fn weights_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("r{i}")).collect()
}

pub fn weight_fields(s: &Spectrum) -> impl Iterator<Item = String> + '_ {
    s.weights().iter().map(|w| fmt_f64(*w))
}

pub fn opt_field<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
