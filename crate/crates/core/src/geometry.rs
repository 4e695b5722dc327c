//! Sub-polytopes of the Weyl chamber and their chamber-relative volumes.
//!
//! Polytopes live in the affine chart `x = (r_1, …, r_{d-1})` with the last
//! weight implied as `1 - Σx`. Only volume fractions of the chamber are ever
//! reported, so the chart choice drops out.
//!
//! The exact pipeline enumerates vertices from every `(d-1)`-subset of
//! constraints in rational arithmetic, then sums facet pyramids recursively:
//! each facet is flattened by eliminating one coordinate, and the pyramid
//! over it from a fixed apex has volume `|a·apex - b| / |a_k| · vol(proj F) / n`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{affine_dim, combinations, dot, solve};
use crate::spectra::{block_layout, sample_chamber, visit_chamber_block, Sign, Spectrum};
use crate::weight::{Rational, Weight};
use crate::EPS;

/// Largest chart dimension accepted by the exact volume pipeline.
pub const MAX_EXACT_DIM: usize = 6;

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

/// `coeffs · x ≤ offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inequality<T: Weight = f64> {
    pub coeffs: Vec<T>,
    pub offset: T,
}

impl<T: Weight> Inequality<T> {
    fn holds(&self, x: &[T]) -> bool {
        dot(&self.coeffs, x) <= self.offset.clone() + T::tolerance()
    }
}

/// Inequality representation in chart coordinates (dimension `d - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope<T: Weight = f64> {
    pub dim: usize,
    pub inequalities: Vec<Inequality<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Spectra majorized by the reference.
    Lower,
    /// Spectra majorizing the reference.
    Upper,
}

impl<T: Weight> HPolytope<T> {
    /// The Weyl chamber of a `d`-level system.
    pub fn chamber(d: usize) -> Self {
        let n = d.saturating_sub(1);
        let mut inequalities = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut coeffs = vec![T::zero(); n];
            coeffs[i + 1] = T::one();
            coeffs[i] = -T::one();
            inequalities.push(Inequality { coeffs, offset: T::zero() });
        }
        if n > 0 {
            // x_{d-1} ≥ 1 - Σx
            let mut coeffs = vec![-T::one(); n];
            coeffs[n - 1] = coeffs[n - 1].clone() - T::one();
            inequalities.push(Inequality { coeffs, offset: -T::one() });
            // 1 - Σx ≥ 0
            inequalities.push(Inequality { coeffs: vec![T::one(); n], offset: T::one() });
        }
        Self { dim: n, inequalities }
    }

    /// Membership of a chart point, with the scalar tolerance on every constraint.
    pub fn contains(&self, x: &[T]) -> bool {
        self.inequalities.iter().all(|ineq| ineq.holds(x))
    }

    /// Membership of a spectrum of dimension `dim + 1`.
    pub fn contains_spectrum(&self, s: &Spectrum<T>) -> bool {
        self.contains(&s.weights()[..self.dim])
    }

    pub fn to_rational(&self) -> HPolytope<Rational> {
        HPolytope {
            dim: self.dim,
            inequalities: self
                .inequalities
                .iter()
                .map(|q| Inequality {
                    coeffs: q.coeffs.iter().map(Weight::to_exact).collect(),
                    offset: q.offset.to_exact(),
                })
                .collect(),
        }
    }

    pub fn to_f64(&self) -> HPolytope<f64> {
        HPolytope {
            dim: self.dim,
            inequalities: self
                .inequalities
                .iter()
                .map(|q| Inequality {
                    coeffs: q.coeffs.iter().map(Weight::to_f64_lossy).collect(),
                    offset: q.offset.to_f64_lossy(),
                })
                .collect(),
        }
    }

    /// `±A_j(x) ≤ ±bound`: `Minus` bounds the prefix sum above, `Plus` below.
    fn push_prefix_constraint(&mut self, j: usize, bound: T, sign: Sign) {
        let unit = if sign == Sign::Plus { -T::one() } else { T::one() };
        let mut coeffs = vec![T::zero(); self.dim];
        for c in coeffs.iter_mut().take(j) {
            *c = unit.clone();
        }
        self.inequalities.push(Inequality { coeffs, offset: unit * bound });
    }
}

/// Chamber points majorized by `r` (`Lower`) or majorizing it (`Upper`).
pub fn cone_polytope<T: Weight>(r: &Spectrum<T>, side: Side) -> HPolytope<T> {
    let sign = match side {
        Side::Lower => Sign::Minus,
        Side::Upper => Sign::Plus,
    };
    let n = r.dim() - 1;
    region_polytope(r, &vec![sign; n]).expect("uniform sign vector of chart length")
}

/// Closure of the chamber cell whose prefix-sum differences against `r`
/// carry the given strict signs (`d - 1` entries, the final zero implied).
pub fn region_polytope<T: Weight>(r: &Spectrum<T>, signs: &[Sign]) -> Result<HPolytope<T>> {
    let n = r.dim() - 1;
    if signs.len() != n {
        return Err(Error::InvalidRegion(alloc::format!("expected {n} signs, got {}", signs.len())));
    }
    if signs.contains(&Sign::Zero) {
        return Err(Error::InvalidRegion("signs must be strict".to_string()));
    }
    let mut p = HPolytope::chamber(r.dim());
    for (j, (bound, sign)) in r.partial_sums().into_iter().zip(signs).enumerate() {
        p.push_prefix_constraint(j + 1, bound, *sign);
    }
    Ok(p)
}

/// Vertices of a polytope in exact arithmetic.
pub fn vertices(p: &HPolytope<Rational>) -> Vec<Vec<Rational>> {
    let n = p.dim;
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(p.inequalities.len(), n) {
        let a = subset.iter().map(|&i| p.inequalities[i].coeffs.clone()).collect();
        let b = subset.iter().map(|&i| p.inequalities[i].offset.clone()).collect();
        let Some(x) = solve::<Rational>(a, b) else { continue };
        if p.contains(&x) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

type Row = (Vec<Rational>, Rational);

fn pyramid_volume(rows: &[Row], verts: &[Vec<Rational>], n: usize) -> Rational {
    if verts.is_empty() {
        return Rational::zero();
    }
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        let lo = verts.iter().map(|v| &v[0]).min().unwrap();
        let hi = verts.iter().map(|v| &v[0]).max().unwrap();
        return hi - lo;
    }
    if affine_dim(verts) != Some(n) {
        return Rational::zero();
    }
    let apex = &verts[0];
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut total = Rational::zero();
    for (idx, (a, b)) in rows.iter().enumerate() {
        let active: Vec<usize> = (0..verts.len()).filter(|&i| dot(a, &verts[i]) == *b).collect();
        if active.len() < n || active[0] == 0 || seen.contains(&active) {
            continue;
        }
        seen.push(active.clone());
        let facet: Vec<Vec<Rational>> = active.iter().map(|&i| verts[i].clone()).collect();
        if affine_dim(&facet) != Some(n - 1) {
            continue;
        }
        let k = (0..n).max_by(|&i, &j| a[i].abs().cmp(&a[j].abs())).unwrap();
        let pivot = a[k].clone();
        let drop_k = |v: &[Rational]| -> Vec<Rational> {
            v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect()
        };
        // Eliminate x_k = (b - Σ_{i≠k} a_i x_i) / a_k from the remaining rows.
        let sub_rows: Vec<Row> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .filter_map(|(_, (c, e))| {
                let ratio = c[k].clone() / pivot.clone();
                let coeffs: Vec<Rational> = (0..n)
                    .filter(|&i| i != k)
                    .map(|i| c[i].clone() - ratio.clone() * a[i].clone())
                    .collect();
                let offset = e.clone() - ratio * b.clone();
                if coeffs.iter().all(Zero::is_zero) {
                    None
                } else {
                    Some((coeffs, offset))
                }
            })
            .collect();
        let projected: Vec<Vec<Rational>> = facet.iter().map(|v| drop_k(v)).collect();
        let base = pyramid_volume(&sub_rows, &projected, n - 1);
        if base.is_zero() {
            continue;
        }
        let height = (dot(a, apex) - b.clone()).abs() / pivot.abs();
        total += height * base / Rational::from_integer(n.into());
    }
    total
}

/// Lebesgue volume in chart coordinates.
fn chart_volume(p: &HPolytope<Rational>) -> Rational {
    let rows: Vec<Row> = p.inequalities.iter().map(|q| (q.coeffs.clone(), q.offset.clone())).collect();
    pyramid_volume(&rows, &vertices(p), p.dim)
}

/// Exact volume of `p` as a fraction of the chamber of the same dimension.
pub fn volume_exact(p: &HPolytope<Rational>) -> Result<Rational> {
    if p.dim > MAX_EXACT_DIM {
        return Err(Error::DimensionTooLargeForExact { dim: p.dim, max: MAX_EXACT_DIM });
    }
    if p.dim == 0 {
        return Ok(if p.inequalities.iter().all(|q| q.offset >= Rational::zero()) {
            Rational::one()
        } else {
            Rational::zero()
        });
    }
    let chamber = chart_volume(&HPolytope::chamber(p.dim + 1));
    Ok(chart_volume(p) / chamber)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMethod {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

impl VolumeMethod {
    pub fn name(&self) -> &'static str {
        match self {
            VolumeMethod::Exact => "exact_rational",
            VolumeMethod::MonteCarlo { .. } => "monte_carlo",
        }
    }
}

/// A chamber-relative volume fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult {
    pub value: f64,
    pub exact: Option<Rational>,
    pub stderr: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl VolumeResult {
    pub fn from_exact(q: Rational) -> Self {
        Self { value: q.to_f64_lossy(), exact: Some(q), stderr: None, samples: None, seed: None }
    }

    /// Binomial estimate `hits / n` with standard error `√(p(1-p)/n)`.
    pub fn from_hits(hits: u64, samples: usize, seed: u64) -> Self {
        let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        let stderr = if samples == 0 { 0.0 } else { libm::sqrt(p * (1.0 - p) / samples as f64) };
        Self { value: p, exact: None, stderr: Some(stderr), samples: Some(samples), seed: Some(seed) }
    }

    pub fn method(&self) -> &'static str {
        if self.exact.is_some() {
            "exact_rational"
        } else {
            "monte_carlo"
        }
    }

    pub fn stderr_or_zero(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }
}

/// Hits of `p` among the chamber points of one sampling block.
pub fn polytope_hits_block(p: &HPolytope<f64>, seed: u64, block: u64, len: usize) -> u64 {
    let mut hits = 0;
    visit_chamber_block(p.dim + 1, seed, block, len, |x| {
        if p.contains(&x[..p.dim]) {
            hits += 1;
        }
    });
    hits
}

pub fn volume_monte_carlo(p: &HPolytope<f64>, samples: usize, seed: u64) -> VolumeResult {
    let hits = block_layout(samples).map(|(b, len)| polytope_hits_block(p, seed, b, len)).sum();
    VolumeResult::from_hits(hits, samples, seed)
}

pub fn volume<T: Weight>(p: &HPolytope<T>, method: VolumeMethod) -> Result<VolumeResult> {
    match method {
        VolumeMethod::Exact => volume_exact(&p.to_rational()).map(VolumeResult::from_exact),
        VolumeMethod::MonteCarlo { samples, seed } => Ok(volume_monte_carlo(&p.to_f64(), samples, seed)),
    }
}

/// Incomparable (`c`), majorized (`e`) and majorizing (`h`) chamber fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct InconvertibilityReport {
    pub c: VolumeResult,
    pub e: VolumeResult,
    pub h: VolumeResult,
}

/// Membership counts against the two cones of a reference spectrum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConeCounts {
    pub lower: u64,
    pub upper: u64,
    pub total: u64,
}

impl ConeCounts {
    pub fn merge(self, other: Self) -> Self {
        Self { lower: self.lower + other.lower, upper: self.upper + other.upper, total: self.total + other.total }
    }
}

/// Classifies one sampling block against `r`; points within tolerance of both
/// cones (i.e. equal to `r`) count as majorized.
pub fn cone_counts_block(r: &Spectrum, seed: u64, block: u64, len: usize) -> ConeCounts {
    let bounds = r.partial_sums();
    let n = r.dim() - 1;
    let check_upper = r.rank() == r.dim();
    let mut counts = ConeCounts { total: len as u64, ..Default::default() };
    visit_chamber_block(r.dim(), seed, block, len, |x| {
        let (mut below, mut above) = (true, check_upper);
        let mut acc = 0.0;
        for j in 0..n {
            acc += x[j];
            below &= acc <= bounds[j] + EPS;
            above &= acc >= bounds[j] - EPS;
            if !below && !above {
                break;
            }
        }
        if below {
            counts.lower += 1;
        } else if above {
            counts.upper += 1;
        }
    });
    counts
}

/// Turns merged counts into a report; `c` is estimated as its own binomial fraction.
pub fn report_from_counts(counts: ConeCounts, seed: u64) -> InconvertibilityReport {
    let n = counts.total as usize;
    InconvertibilityReport {
        e: VolumeResult::from_hits(counts.lower, n, seed),
        h: VolumeResult::from_hits(counts.upper, n, seed),
        c: VolumeResult::from_hits(counts.total - counts.lower - counts.upper, n, seed),
    }
}

fn trivial_report(method: VolumeMethod) -> InconvertibilityReport {
    // A single point: the reference is its own whole chamber, counted as majorized.
    let (e, h, c) = match method {
        VolumeMethod::Exact => (
            VolumeResult::from_exact(Rational::one()),
            VolumeResult::from_exact(Rational::zero()),
            VolumeResult::from_exact(Rational::zero()),
        ),
        VolumeMethod::MonteCarlo { samples, seed } => (
            VolumeResult::from_hits(samples as u64, samples, seed),
            VolumeResult::from_hits(0, samples, seed),
            VolumeResult::from_hits(0, samples, seed),
        ),
    };
    InconvertibilityReport { c, e, h }
}

/// `C_d(r) = 1 - E_d(r) - H_d(r)`; the majorizing cone of a rank-deficient
/// spectrum lies on the chamber boundary and is reported as zero.
pub fn inconvertibility<T: Weight>(r: &Spectrum<T>, method: VolumeMethod) -> Result<InconvertibilityReport> {
    if r.dim() == 1 {
        return Ok(trivial_report(method));
    }
    match method {
        VolumeMethod::Exact => {
            let exact = r.to_exact();
            if exact.dim() - 1 > MAX_EXACT_DIM {
                return Err(Error::DimensionTooLargeForExact { dim: exact.dim() - 1, max: MAX_EXACT_DIM });
            }
            let e = volume_exact(&cone_polytope(&exact, Side::Lower))?;
            let h = if r.rank() < r.dim() {
                Rational::zero()
            } else {
                volume_exact(&cone_polytope(&exact, Side::Upper))?
            };
            let c = Rational::one() - e.clone() - h.clone();
            Ok(InconvertibilityReport {
                c: VolumeResult::from_exact(c),
                e: VolumeResult::from_exact(e),
                h: VolumeResult::from_exact(h),
            })
        }
        VolumeMethod::MonteCarlo { samples, seed } => {
            let rf = r.to_f64();
            let counts = block_layout(samples)
                .map(|(b, len)| cone_counts_block(&rf, seed, b, len))
                .fold(ConeCounts::default(), ConeCounts::merge);
            Ok(report_from_counts(counts, seed))
        }
    }
}

/// One row of a `χ(q)` inconvertibility sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiCurveRow {
    pub q: f64,
    pub report: InconvertibilityReport,
}

pub fn chi_curve(d: usize, q_grid: &[f64], method: VolumeMethod) -> Result<Vec<ChiCurveRow>> {
    q_grid
        .iter()
        .map(|&q| {
            let chi = match method {
                VolumeMethod::Exact => inconvertibility(&crate::families::chi(crate::weight::rational_from_f64(q), d)?, method)?,
                VolumeMethod::MonteCarlo { .. } => inconvertibility(&crate::families::chi(q, d)?, method)?,
            };
            Ok(ChiCurveRow { q, report: chi })
        })
        .collect()
}

/// One row of a complementarity scatter.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub id: String,
    pub spectrum: Spectrum,
    pub report: InconvertibilityReport,
}

/// `(E, H, C)` for `n` uniform chamber points (same `seed` for point
/// generation and, with Monte Carlo, for volume estimation). With
/// `include_apex` a final row for `u(d-1)` is appended.
pub fn complementarity_scatter(
    d: usize,
    n: usize,
    seed: u64,
    method: VolumeMethod,
    include_apex: bool,
) -> Result<Vec<ScatterRow>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut rows = Vec::with_capacity(n + 1);
    for (i, r) in sample_chamber(d, n, seed)?.into_iter().enumerate() {
        let report = inconvertibility(&r, method)?;
        rows.push(ScatterRow { id: alloc::format!("{i}"), spectrum: r, report });
    }
    if include_apex {
        let apex = crate::families::uniform::<Rational>(d - 1, d)?;
        let report = inconvertibility(&apex, method)?;
        rows.push(ScatterRow { id: alloc::format!("u({})", d - 1), spectrum: apex.to_f64(), report });
    }
    Ok(rows)
}
