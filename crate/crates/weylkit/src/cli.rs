//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use weylkit_core::entropies::{catalyst_check, f_profile, find_crossings, trump_verdict_with_profile, NuGridConfig, Trump};
use weylkit_core::families::{chi, depolarization_bounds};
use weylkit_core::geometry::{cone_polytope, inconvertibility, InconvertibilityReport, Side, VolumeMethod, DEFAULT_SAMPLES};
use weylkit_core::measures::{
    algebraic_incomparability, conversion_probability, incomparability_distance, operational_incomparability, stretch_to_majorize, Norm,
};
use weylkit_core::spectra::sample_chamber;
use weylkit_core::weight::{parse_rational, rational_to_string};
use weylkit_core::{compare, tensor, Rational, Spectrum, Weight};

use crate::error::{CliError, CliResult};
use crate::format::{
    fmt_f64, grid_from_json, inconvertibility_json, lorenz_csv, measure_json, opt_field, outcome_json, polytope_json,
    profile_csv, sign_symbol, spectrum_from_json_exact, spectrum_from_json_f64, spectrum_json, weight_fields,
    weights_header, Csv, JsonScalar,
};
use crate::input::{read_text, Source};
use crate::parallel::{inconvertibility_par, pool};

#[derive(Debug, Parser)]
#[command(name = "weylkit", version, about = "Majorization, catalysis and inconvertibility of probability spectra")]
pub struct Cli {
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Majorization relation, sign sequence and inversion rank of r against s.
    Compare {
        #[command(flatten)]
        input: PairInput,
        /// Parse weights as exact rationals.
        #[arg(long)]
        exact: bool,
    },
    /// Incomparability measures of r and s.
    Measure(MeasureArgs),
    /// Catalytic comparability verdict and the F-profile.
    Trump(TrumpArgs),
    /// Lorenz curve ordinates of r (and s).
    Lorenz {
        #[command(flatten)]
        input: PairInput,
    },
    /// Inconvertibility C, E, H of a spectrum.
    Inconv(InconvArgs),
    /// Inconvertibility of depolarized pure spectra over a q grid.
    ChiCurve(ChiCurveArgs),
    /// Inconvertibility of random chamber points.
    Scatter(ScatterArgs),
    /// Uniform chamber samples, or tensor products of two 2-level samples.
    Sample(SampleArgs),
    /// Depolarized pure spectra bounding a spectrum from above and below.
    Bounds {
        #[command(flatten)]
        input: PairInput,
        #[arg(long)]
        exact: bool,
    },
}

/// Spectrum inputs. Family flags supply whichever of r and s is missing.
#[derive(Debug, Args, Default)]
pub struct PairInput {
    /// Weights of r, comma separated (decimals or p/q).
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// File with the weights of r (JSON array or plain list).
    #[arg(long, conflicts_with = "r")]
    pub r_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, conflicts_with = "s")]
    pub s_file: Option<PathBuf>,
    /// The k-uniform spectrum u(k) (needs --d).
    #[arg(long, conflicts_with_all = ["chi", "boltzmann"])]
    pub uniform: Option<usize>,
    /// The depolarized pure spectrum chi(q) (needs --d).
    #[arg(long, conflicts_with = "boltzmann")]
    pub chi: Option<String>,
    /// The Boltzmann partition spectrum for N levels and k occupied.
    #[arg(long, num_args = 1..=2, value_delimiter = ',', value_names = ["N", "K"])]
    pub boltzmann: Option<Vec<usize>>,
    /// Dimension for family flags.
    #[arg(long)]
    pub d: Option<usize>,
    /// Rescale weights to sum to one instead of rejecting them.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Euclidean,
    Trace,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub input: PairInput,
    /// Entropy cost of reaching the meet, I_O.
    #[arg(long)]
    pub operational: bool,
    /// Distance to the nearest comparable configuration, I_D.
    #[arg(long)]
    pub distance: bool,
    /// One minus the best conversion probability, I_A.
    #[arg(long)]
    pub algebraic: bool,
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value = "euclidean")]
    pub norm: NormArg,
    /// Compute I_A in exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// JSON file of pairs ({"r": [...], "s": [...]} or [[...], [...]]); emits CSV.
    #[arg(long)]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrumpArgs {
    #[command(flatten)]
    pub input: PairInput,
    /// nu grid as JSON ({min, max, count, log_tail_max, tail_count}), inline or a file path.
    #[arg(long)]
    pub grid: Option<String>,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
    /// Write the F-profile CSV here.
    #[arg(long)]
    pub profile_csv: Option<PathBuf>,
    /// Check whether this spectrum catalyses r into s.
    #[arg(long, allow_hyphen_values = true)]
    pub catalyst: Option<String>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl McArgs {
    fn method(&self) -> VolumeMethod {
        match self.method {
            MethodArg::Exact => VolumeMethod::Exact,
            MethodArg::Mc => VolumeMethod::MonteCarlo { samples: self.samples, seed: self.seed },
        }
    }
}

#[derive(Debug, Args)]
pub struct InconvArgs {
    #[command(flatten)]
    pub input: PairInput,
    #[command(flatten)]
    pub mc: McArgs,
    /// Write the H-representations of both cones as JSON.
    #[arg(long)]
    pub dump_polytope: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChiCurveArgs {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    /// Explicit q values, comma separated (decimals or p/q).
    #[arg(long, value_delimiter = ',', conflicts_with = "steps")]
    pub q: Option<Vec<String>>,
    /// Use q = i/steps for i = 0..=steps.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Append the u(d-1) row.
    #[arg(long)]
    pub apex: bool,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, required_unless_present = "product")]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tensor products of two 2-level spectra (d = 4).
    #[arg(long, conflicts_with = "d")]
    pub product: bool,
}

/// What a run produced: the main document, side files and warnings.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Output {
    pub main: String,
    pub files: Vec<(PathBuf, String)>,
    pub warnings: Vec<String>,
}

fn family_source(input: &PairInput) -> CliResult<Option<Source>> {
    let need_d = |flag: &str| input.d.ok_or_else(|| CliError::Parse(format!("--{flag} needs --d")));
    if let Some(k) = input.uniform {
        return Ok(Some(Source::Uniform { k, d: need_d("uniform")? }));
    }
    if let Some(q) = &input.chi {
        return Ok(Some(Source::Chi { q: q.clone(), d: need_d("chi")? }));
    }
    if let Some(nk) = &input.boltzmann {
        let [n, k] = nk[..] else {
            return Err(CliError::Parse("--boltzmann takes N and K (as 'N K' or 'N,K')".into()));
        };
        return Ok(Some(Source::Boltzmann { n, k }));
    }
    Ok(None)
}

fn explicit_source(inline: &Option<String>, file: &Option<PathBuf>) -> CliResult<Option<Source>> {
    match (inline, file) {
        (Some(text), _) => Source::inline(text).map(Some),
        (None, Some(path)) => Source::file(path).map(Some),
        (None, None) => Ok(None),
    }
}

impl PairInput {
    /// `(r, s)` sources; the family flag fills the first missing slot.
    fn sources(&self) -> CliResult<(Option<Source>, Option<Source>)> {
        let mut r = explicit_source(&self.r, &self.r_file)?;
        let mut s = explicit_source(&self.s, &self.s_file)?;
        if let Some(f) = family_source(self)? {
            if r.is_none() {
                r = Some(f);
            } else if s.is_none() {
                s = Some(f);
            } else {
                return Err(CliError::Parse("family flag given together with both --r and --s".into()));
            }
        }
        Ok((r, s))
    }

    fn single(&self) -> CliResult<Source> {
        match self.sources()? {
            (Some(r), None) => Ok(r),
            (None, _) => Err(CliError::Parse("missing spectrum: use --r, --r-file or a family flag".into())),
            (Some(_), Some(_)) => Err(CliError::Parse("this command takes a single spectrum".into())),
        }
    }

    fn pair(&self) -> CliResult<(Source, Source)> {
        match self.sources()? {
            (Some(r), Some(s)) => Ok((r, s)),
            _ => Err(CliError::Parse("two spectra needed: r and s".into())),
        }
    }
}

fn note_unsorted(name: &str, src: &Source, warnings: &mut Vec<String>) -> CliResult<()> {
    if !src.was_sorted()? {
        warnings.push(format!("{name} was not sorted in nonincreasing order and has been reordered"));
    }
    Ok(())
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON");
    s.push('\n');
    s
}

fn with_warnings(mut v: Value, warnings: &[String]) -> Value {
    v["warnings"] = json!(warnings);
    v
}

fn run_compare(input: &PairInput, exact: bool) -> CliResult<Output> {
    let (rs, ss) = input.pair()?;
    let mut warnings = Vec::new();
    note_unsorted("r", &rs, &mut warnings)?;
    note_unsorted("s", &ss, &mut warnings)?;
    fn doc<T: JsonScalar>(r: &Spectrum<T>, s: &Spectrum<T>) -> Value {
        let mut v = outcome_json(&compare(r, s));
        v["r"] = spectrum_json(r);
        v["s"] = spectrum_json(s);
        v
    }
    let v = if exact {
        doc(&rs.to_exact(input.normalize)?, &ss.to_exact(input.normalize)?)
    } else {
        doc(&rs.to_f64(input.normalize)?, &ss.to_f64(input.normalize)?)
    };
    Ok(Output { main: to_json_text(&with_warnings(v, &warnings)), warnings, ..Default::default() })
}

/// `I_A` with the stretched spectrum that attains the better conversion probability.
fn algebraic_json<T: JsonScalar>(r: &Spectrum<T>, s: &Spectrum<T>) -> Value {
    let q_rs = conversion_probability(r, s);
    let q_sr = conversion_probability(s, r);
    let (moved, (mu, stretched)) =
        if q_rs >= q_sr { ("r", stretch_to_majorize(r, s)) } else { ("s", stretch_to_majorize(s, r)) };
    let value = T::one() - mu.clone();
    let mut v = json!({
        "measure": "algebraic",
        "value": value.to_f64_lossy(),
        "optimizer": spectrum_json(&stretched),
        "direction": { "moved": moved, "cone": null },
        "method": "conversion probability",
        "stretch": mu.to_json(),
    });
    if T::tolerance() == T::zero() {
        v["exact"] = value.to_json();
    }
    v
}

struct Selection {
    operational: bool,
    distance: bool,
    algebraic: bool,
}

impl Selection {
    fn from(a: &MeasureArgs) -> Self {
        let none = !(a.operational || a.distance || a.algebraic);
        Self {
            operational: a.all || none || a.operational,
            distance: a.all || none || a.distance,
            algebraic: a.all || none || a.algebraic,
        }
    }
}

fn norm(n: NormArg) -> Norm {
    match n {
        NormArg::Euclidean => Norm::Euclidean,
        NormArg::Trace => Norm::Trace,
    }
}

fn run_measure(a: &MeasureArgs) -> CliResult<Output> {
    let sel = Selection::from(a);
    if let Some(path) = &a.batch {
        return run_measure_batch(a, &sel, path);
    }
    let (rs, ss) = a.input.pair()?;
    let mut warnings = Vec::new();
    note_unsorted("r", &rs, &mut warnings)?;
    note_unsorted("s", &ss, &mut warnings)?;
    let (r, s) = (rs.to_f64(a.input.normalize)?, ss.to_f64(a.input.normalize)?);
    let mut reports = Vec::new();
    if sel.operational {
        reports.push(measure_json(&operational_incomparability(&r, &s)));
    }
    if sel.distance {
        reports.push(measure_json(&incomparability_distance(&r, &s, norm(a.norm))?));
    }
    if sel.algebraic {
        reports.push(if a.exact {
            algebraic_json(&rs.to_exact(a.input.normalize)?, &ss.to_exact(a.input.normalize)?)
        } else {
            algebraic_json(&r, &s)
        });
    }
    let v = json!({ "r": spectrum_json(&r), "s": spectrum_json(&s), "reports": reports });
    Ok(Output { main: to_json_text(&with_warnings(v, &warnings)), warnings, ..Default::default() })
}

fn batch_pairs(text: &str) -> CliResult<Vec<(String, Value, Value)>> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("batch file: {e}")))?;
    let items = v.as_array().ok_or_else(|| CliError::Parse("batch file must hold an array of pairs".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Value::Object(m) => {
                let get = |k: &str| m.get(k).cloned().ok_or_else(|| CliError::Parse(format!("pair {i}: missing '{k}'")));
                let id = match m.get("id") {
                    Some(Value::String(s)) => s.clone(),
                    Some(other) => other.to_string(),
                    None => i.to_string(),
                };
                Ok((id, get("r")?, get("s")?))
            }
            Value::Array(a) if a.len() == 2 => Ok((i.to_string(), a[0].clone(), a[1].clone())),
            _ => Err(CliError::Parse(format!("pair {i}: expected {{\"r\", \"s\"}} or a two-element array"))),
        })
        .collect()
}

fn run_measure_batch(a: &MeasureArgs, sel: &Selection, path: &Path) -> CliResult<Output> {
    let pairs = batch_pairs(&read_text(path)?)?;
    let normalize = a.input.normalize;
    let n = norm(a.norm);
    let rows: Vec<CliResult<Vec<String>>> = pool().install(|| {
        pairs
            .par_iter()
            .map(|(id, rv, sv)| {
                let r = spectrum_from_json_f64(rv, normalize)?;
                let s = spectrum_from_json_f64(sv, normalize)?;
                let mut row = vec![id.clone()];
                if sel.operational {
                    row.push(fmt_f64(operational_incomparability(&r, &s).value));
                }
                if sel.distance {
                    row.push(fmt_f64(incomparability_distance(&r, &s, n)?.value));
                }
                if sel.algebraic {
                    if a.exact {
                        let re = spectrum_from_json_exact(rv, normalize)?;
                        let se = spectrum_from_json_exact(sv, normalize)?;
                        let q = algebraic_incomparability(&re, &se);
                        row.push(fmt_f64(q.to_f64_lossy()));
                        row.push(rational_to_string(&q));
                    } else {
                        row.push(fmt_f64(algebraic_incomparability(&r, &s)));
                    }
                }
                Ok(row)
            })
            .collect()
    });
    let mut header = vec!["id"];
    if sel.operational {
        header.push("operational");
    }
    if sel.distance {
        header.push("distance");
    }
    if sel.algebraic {
        header.push("algebraic");
        if a.exact {
            header.push("algebraic_exact");
        }
    }
    let mut csv = Csv::new(&header);
    for row in rows {
        csv.row(row?);
    }
    Ok(Output { main: csv.finish(), ..Default::default() })
}

fn verdict_name(t: Trump) -> &'static str {
    match t {
        Trump::Trumps => "Trumps",
        Trump::TrumpedBy => "TrumpedBy",
        Trump::StronglyIncomparable => "StronglyIncomparable",
        Trump::Equal => "Equal",
        Trump::BoundaryIsoentropic => "BoundaryIsoentropic",
    }
}

fn load_grid(spec: &Option<String>) -> CliResult<NuGridConfig> {
    match spec {
        None => Ok(NuGridConfig::default()),
        Some(text) if text.trim_start().starts_with('{') => grid_from_json(text),
        Some(path) => grid_from_json(&read_text(path.as_ref())?),
    }
}

fn run_trump(a: &TrumpArgs) -> CliResult<Output> {
    let (rs, ss) = a.input.pair()?;
    let mut warnings = Vec::new();
    note_unsorted("r", &rs, &mut warnings)?;
    note_unsorted("s", &ss, &mut warnings)?;
    let (r, s) = (rs.to_f64(a.input.normalize)?, ss.to_f64(a.input.normalize)?);
    let grid = load_grid(&a.grid)?;
    let profile = f_profile(&r, &s, &grid);
    let verdict = trump_verdict_with_profile(&r, &s, &profile);
    let crossings = find_crossings(&r, &s, &profile);
    let scale = if a.bits { std::f64::consts::LN_2 } else { 1.0 };
    let mut v = json!({
        "r": spectrum_json(&r),
        "s": spectrum_json(&s),
        "verdict": verdict_name(verdict.verdict),
        "via_parity": verdict.via_parity,
        "min_abs_F": verdict.min_abs_f / scale,
        "units": if a.bits { "bits" } else { "nats" },
        "limit_signs": { "lower": sign_symbol(profile.lower_limit), "upper": sign_symbol(profile.upper_limit) },
        "grid_points": profile.nu.len(),
        "trimmed_rank": profile.trimmed_rank,
        "crossings": crossings.iter().map(|c| json!({ "lo": c.lo, "hi": c.hi, "nu": c.nu })).collect::<Vec<_>>(),
    });
    if let Some(text) = &a.catalyst {
        let c = Source::inline(text)?.to_f64(a.input.normalize)?;
        v["catalyst"] = json!({ "c": spectrum_json(&c), "catalyzes": catalyst_check(&r, &s, &c) });
    }
    let mut files = Vec::new();
    if let Some(path) = &a.profile_csv {
        let p = if a.bits { profile.in_bits() } else { profile };
        files.push((path.clone(), profile_csv(&p)));
    }
    Ok(Output { main: to_json_text(&with_warnings(v, &warnings)), files, warnings })
}

fn run_lorenz(input: &PairInput) -> CliResult<Output> {
    let (rs, ss) = input.sources()?;
    let rs = rs.ok_or_else(|| CliError::Parse("missing spectrum r".into()))?;
    let mut warnings = Vec::new();
    note_unsorted("r", &rs, &mut warnings)?;
    let r = rs.to_f64(input.normalize)?;
    let main = match ss {
        Some(ss) => {
            note_unsorted("s", &ss, &mut warnings)?;
            let s = ss.to_f64(input.normalize)?;
            lorenz_csv(&[("r", &r), ("s", &s)])
        }
        None => lorenz_csv(&[("r", &r)]),
    };
    Ok(Output { main, warnings, ..Default::default() })
}

fn run_inconv(a: &InconvArgs) -> CliResult<Output> {
    let src = a.input.single()?;
    let mut warnings = Vec::new();
    note_unsorted("r", &src, &mut warnings)?;
    let method = a.mc.method();
    let (mut v, dump) = match method {
        VolumeMethod::Exact => {
            let r = src.to_exact(a.input.normalize)?;
            let rep = inconvertibility(&r, method)?;
            let dump = polytope_dump(&r);
            (report_doc(&spectrum_json(&r), r.dim(), &rep), dump)
        }
        VolumeMethod::MonteCarlo { .. } => {
            let r = src.to_f64(a.input.normalize)?;
            let rep = pool().install(|| inconvertibility_par(&r, method))?;
            let dump = polytope_dump(&r);
            (report_doc(&spectrum_json(&r), r.dim(), &rep), dump)
        }
    };
    v = with_warnings(v, &warnings);
    let files = a.dump_polytope.iter().map(|p| (p.clone(), to_json_text(&dump))).collect();
    Ok(Output { main: to_json_text(&v), files, warnings })
}

fn report_doc(spectrum: &Value, d: usize, rep: &InconvertibilityReport) -> Value {
    let mut v = inconvertibility_json(rep);
    v["spectrum"] = spectrum.clone();
    v["d"] = json!(d);
    v
}

fn polytope_dump<T: JsonScalar>(r: &Spectrum<T>) -> Value {
    if r.dim() < 2 {
        return json!({ "lower": null, "upper": null });
    }
    json!({
        "lower": polytope_json(&cone_polytope(r, Side::Lower)),
        "upper": polytope_json(&cone_polytope(r, Side::Upper)),
    })
}

fn report_fields(rep: &InconvertibilityReport) -> [String; 7] {
    [
        fmt_f64(rep.c.value),
        fmt_f64(rep.e.value),
        fmt_f64(rep.h.value),
        rep.c.stderr.map(fmt_f64).unwrap_or_default(),
        rep.c.method().to_string(),
        opt_field(rep.c.samples),
        opt_field(rep.c.seed),
    ]
}

const REPORT_HEADER: [&str; 7] = ["C", "E", "H", "stderr", "method", "samples", "seed"];

fn run_chi_curve(a: &ChiCurveArgs) -> CliResult<Output> {
    let qs: Vec<(String, Rational)> = match &a.q {
        Some(list) => list.iter().map(|t| Ok((t.clone(), parse_rational(t)?))).collect::<CliResult<_>>()?,
        None => {
            if a.steps == 0 {
                return Err(CliError::Parse("--steps must be positive".into()));
            }
            (0..=a.steps)
                .map(|i| {
                    let q = Rational::new((i as i64).into(), (a.steps as i64).into());
                    (fmt_f64(q.to_f64_lossy()), q)
                })
                .collect()
        }
    };
    let method = a.mc.method();
    let jobs: Vec<(usize, &(String, Rational))> = a.d.iter().flat_map(|&d| qs.iter().map(move |q| (d, q))).collect();
    let rows: Vec<CliResult<Vec<String>>> = pool().install(|| {
        jobs.par_iter()
            .map(|&(d, (label, q))| {
                let rep = match method {
                    VolumeMethod::Exact => inconvertibility(&chi(q.clone(), d)?, method)?,
                    VolumeMethod::MonteCarlo { .. } => inconvertibility(&chi(q.to_f64_lossy(), d)?, method)?,
                };
                let mut row = vec![d.to_string(), label.clone()];
                row.extend(report_fields(&rep));
                Ok(row)
            })
            .collect()
    });
    let mut header = vec!["d", "q"];
    header.extend(REPORT_HEADER);
    let mut csv = Csv::new(&header);
    for row in rows {
        csv.row(row?);
    }
    Ok(Output { main: csv.finish(), ..Default::default() })
}

fn run_scatter(a: &ScatterArgs) -> CliResult<Output> {
    if a.d < 2 {
        return Err(weylkit_core::Error::InvalidDimension(a.d).into());
    }
    let method = a.mc.method();
    let points = sample_chamber(a.d, a.n, a.mc.seed)?;
    let mut rows: Vec<CliResult<(String, Spectrum, InconvertibilityReport)>> = pool().install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(i, r)| {
                let rep = inconvertibility(&r, method)?;
                Ok((i.to_string(), r, rep))
            })
            .collect()
    });
    if a.apex {
        let apex = weylkit_core::families::uniform::<Rational>(a.d - 1, a.d)?;
        let rep = inconvertibility(&apex, method);
        rows.push(rep.map(|rep| (format!("u({})", a.d - 1), apex.to_f64(), rep)).map_err(CliError::from));
    }
    let mut header = vec!["id".to_string()];
    header.extend(weights_header(a.d));
    header.extend(REPORT_HEADER.iter().map(|s| s.to_string()));
    let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for row in rows {
        let (id, r, rep) = row?;
        let mut fields = vec![id];
        fields.extend(weight_fields(&r));
        fields.extend(report_fields(&rep));
        csv.row(fields);
    }
    Ok(Output { main: csv.finish(), ..Default::default() })
}

fn run_sample(a: &SampleArgs) -> CliResult<Output> {
    let spectra: Vec<Spectrum> = if a.product {
        let halves = sample_chamber(2, 2 * a.n, a.seed)?;
        halves.chunks(2).map(|p| tensor(&p[0], &p[1])).collect()
    } else {
        sample_chamber(a.d.unwrap_or(0), a.n, a.seed)?
    };
    let d = if a.product { 4 } else { a.d.unwrap_or(0) };
    let mut header = vec!["id".to_string()];
    header.extend(weights_header(d));
    let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for (i, s) in spectra.iter().enumerate() {
        csv.row(std::iter::once(i.to_string()).chain(weight_fields(s)));
    }
    Ok(Output { main: csv.finish(), ..Default::default() })
}

fn run_bounds(input: &PairInput, exact: bool) -> CliResult<Output> {
    let src = input.single()?;
    let mut warnings = Vec::new();
    note_unsorted("s", &src, &mut warnings)?;
    fn doc<T: JsonScalar>(s: &Spectrum<T>) -> Value {
        let b = depolarization_bounds(s);
        json!({
            "s": spectrum_json(s),
            "upper": spectrum_json(&b.upper),
            "lower": spectrum_json(&b.lower),
            "q_upper": b.q_upper.to_json(),
            "q_lower": b.q_lower.to_json(),
        })
    }
    let v = if exact { doc(&src.to_exact(input.normalize)?) } else { doc(&src.to_f64(input.normalize)?) };
    Ok(Output { main: to_json_text(&with_warnings(v, &warnings)), warnings, ..Default::default() })
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let mut out = match &cli.command {
        Command::Compare { input, exact } => run_compare(input, *exact),
        Command::Measure(a) => run_measure(a),
        Command::Trump(a) => run_trump(a),
        Command::Lorenz { input } => run_lorenz(input),
        Command::Inconv(a) => run_inconv(a),
        Command::ChiCurve(a) => run_chi_curve(a),
        Command::Scatter(a) => run_scatter(a),
        Command::Sample(a) => run_sample(a),
        Command::Bounds { input, exact } => run_bounds(input, *exact),
    }?;
    if let Some(path) = &cli.output {
        out.files.insert(0, (path.clone(), std::mem::take(&mut out.main)));
    }
    Ok(out)
}

/// Flags equivalent to a JSON config object: `command` names the subcommand,
/// other keys become `--key value` (underscores turn into hyphens). `true`
/// becomes a bare flag, `false` and `null` are dropped, arrays are joined
/// with commas and objects are passed through as inline JSON.
pub fn argv_from_config(config: &Value) -> CliResult<Vec<String>> {
    let obj: &Map<String, Value> = config.as_object().ok_or_else(|| CliError::Parse("config must be a JSON object".into()))?;
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Parse("config needs a string 'command'".into()))?;
    let scalar = |v: &Value| -> CliResult<String> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(CliError::Parse(format!("config: unsupported value {other}"))),
        }
    };
    let mut argv = vec!["weylkit".to_string(), command.to_string()];
    for (key, value) in obj.iter().filter(|(k, _)| k.as_str() != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<CliResult<Vec<_>>>()?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            Value::Object(_) => {
                argv.push(flag);
                argv.push(value.to_string());
            }
            other => {
                argv.push(flag);
                argv.push(scalar(other)?);
            }
        }
    }
    Ok(argv)
}

/// Result of parsing arguments: a command to run, or text clap wants shown.
pub enum Parsed {
    Run(Box<Cli>),
    Display(String),
}

/// Parses argv, expanding `weylkit --config FILE` first.
pub fn parse_args(args: Vec<OsString>) -> CliResult<Parsed> {
    let args = if args.get(1).is_some_and(|a| a == "--config") {
        let path = args.get(2).ok_or_else(|| CliError::Parse("--config needs a file".into()))?;
        if args.len() > 3 {
            return Err(CliError::Parse("--config cannot be combined with other arguments".into()));
        }
        let path = PathBuf::from(path);
        let v: Value = serde_json::from_str(&read_text(&path)?)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        argv_from_config(&v)?.into_iter().map(OsString::from).collect()
    } else {
        args
    };
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(Parsed::Run(Box::new(cli))),
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            Ok(Parsed::Display(e.to_string()))
        }
        Err(e) => Err(CliError::Parse(e.to_string().trim_end().to_string())),
    }
}
