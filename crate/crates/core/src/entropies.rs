//! The generalized entropy family `f_ν` and catalytic (trumping) comparability.
//!
//! `f_ν(r) = ln Σ r_i^ν / (ν(1-ν))` away from `ν ∈ {0, 1}`, the Burg entropy
//! `(1/d) Σ ln r_i` at `ν = 0` and the Shannon entropy at `ν = 1`, all in nats.
//! `r` trumps `s` iff `F(ν, r, s) = f_ν(s) - f_ν(r) > 0` for every `ν` after
//! dropping the trailing zeros the two spectra share. A finite grid can only
//! certify that numerically, so verdicts carry the smallest `|F|` seen.
//!
//! `F` decays like `1/|ν|` in both tails, so near-ties among the extreme
//! weights push sign changes far beyond any practical grid. The sign of the
//! leading term is known in closed form, though: towards `+∞` it is the first
//! strict sign of the partial-sum comparison, and at the lower end of the
//! domain (`-∞`, or `0⁺` when the ranks differ) the last one. Profiles keep
//! both as limit signs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::spectra::{compare, tensor, Relation, Sign, Spectrum};
use crate::weight::Weight;
use crate::EPS;

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn shannon(r: &Spectrum) -> f64 {
    -r.weights().iter().filter(|w| **w > 0.0).map(|w| w * libm::log(*w)).sum::<f64>()
}

/// Burg entropy `(1/d) Σ ln r_i`; requires strictly positive weights.
pub fn burg(r: &Spectrum) -> Result<f64> {
    if r.rank() < r.dim() {
        return Err(Error::UndefinedForZeroWeights(0.0));
    }
    Ok(r.weights().iter().map(|w| libm::log(*w)).sum::<f64>() / r.dim() as f64)
}

/// `ln Σ r_i^ν` over the positive weights, evaluated in log-sum-exp form.
fn log_power_sum(weights: &[f64], nu: f64) -> f64 {
    let logs: Vec<f64> = weights.iter().filter(|w| **w > 0.0).map(|w| nu * libm::log(*w)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + libm::log(logs.iter().map(|l| libm::exp(l - top)).sum::<f64>())
}

/// One member of the generalized entropy family.
pub fn f_nu(r: &Spectrum, nu: f64) -> Result<f64> {
    if nu == 1.0 {
        return Ok(shannon(r));
    }
    if nu <= 0.0 && r.rank() < r.dim() {
        return Err(Error::UndefinedForZeroWeights(nu));
    }
    if nu == 0.0 {
        return burg(r);
    }
    Ok(log_power_sum(r.weights(), nu) / (nu * (1.0 - nu)))
}

/// Grid of `ν` values on which `F` is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuGridConfig {
    pub min: f64,
    pub max: f64,
    /// Linearly spaced points on `[min, max]`.
    pub count: usize,
    /// Log-spaced tails extend out to `±log_tail_max`.
    pub log_tail_max: f64,
    /// Points per tail.
    pub tail_count: usize,
}

impl Default for NuGridConfig {
    fn default() -> Self {
        Self { min: -5.0, max: 5.0, count: 2001, log_tail_max: 100.0, tail_count: 100 }
    }
}

fn log_tail(from: f64, to: f64, count: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (libm::log(from), libm::log(to));
    (1..=count).map(move |i| libm::exp(a + (b - a) * i as f64 / count as f64))
}

impl NuGridConfig {
    /// Sorted, deduplicated grid, always containing the exact points 0 and 1.
    pub fn points(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(self.count + 2 * self.tail_count + 2);
        pts.extend([0.0, 1.0]);
        match self.count {
            0 => {}
            1 => pts.push(self.min),
            n => pts.extend((0..n).map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)),
        }
        if self.tail_count > 0 {
            if self.max > 0.0 && self.log_tail_max > self.max {
                pts.extend(log_tail(self.max, self.log_tail_max, self.tail_count));
            }
            if self.min < 0.0 && self.log_tail_max > -self.min {
                pts.extend(log_tail(-self.min, self.log_tail_max, self.tail_count).map(|x| -x));
            }
        }
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        pts
    }
}

/// `F(ν, r, s)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FProfile {
    pub nu: Vec<f64>,
    pub f_source: Vec<f64>,
    pub f_target: Vec<f64>,
    /// `f_ν(target) - f_ν(source)`.
    pub values: Vec<f64>,
    /// Common length after dropping shared trailing zeros.
    pub trimmed_rank: usize,
    pub ranks_equal: bool,
    pub source_rank: usize,
    pub target_rank: usize,
    /// Sign of `F` as `ν` approaches the lower end of its domain.
    pub lower_limit: Sign,
    /// Sign of `F` as `ν → +∞`.
    pub upper_limit: Sign,
}

impl FProfile {
    /// Whether `F` is positive, negative or within `ε` of zero anywhere,
    /// counting the limit signs.
    pub fn observed_signs(&self) -> (bool, bool, bool) {
        let limits = [self.lower_limit, self.upper_limit];
        let pos = limits.contains(&Sign::Plus) || self.values.iter().any(|v| *v > EPS);
        let neg = limits.contains(&Sign::Minus) || self.values.iter().any(|v| *v < -EPS);
        let touch = self.values.iter().any(|v| v.abs() <= EPS);
        (pos, neg, touch)
    }

    pub fn min_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min)
    }

    /// Same profile with entropies expressed in bits.
    pub fn in_bits(&self) -> Self {
        let scale = |v: &Vec<f64>| v.iter().map(|x| x / core::f64::consts::LN_2).collect();
        Self {
            f_source: scale(&self.f_source),
            f_target: scale(&self.f_target),
            values: scale(&self.values),
            ..self.clone()
        }
    }
}

/// Pads both spectra to a common dimension, then drops the trailing zeros
/// beyond the larger rank.
fn trimmed_pair(r: &Spectrum, s: &Spectrum) -> (Spectrum, Spectrum) {
    let d = r.dim().max(s.dim());
    let m = r.rank().max(s.rank()).max(1);
    (r.padded(d).truncated(m), s.padded(d).truncated(m))
}

pub fn f_profile(r: &Spectrum, s: &Spectrum, grid: &NuGridConfig) -> FProfile {
    let (rt, st) = trimmed_pair(r, s);
    let m = rt.dim();
    let nonpositive_ok = rt.rank() == m && st.rank() == m;
    let signs = compare(&rt, &st).signs;
    let mut strict = signs.iter().copied().filter(|s| *s != Sign::Zero);
    let upper_limit = strict.next().unwrap_or(Sign::Zero);
    let lower_limit = strict.next_back().unwrap_or(upper_limit);
    let mut out = FProfile {
        nu: Vec::new(),
        f_source: Vec::new(),
        f_target: Vec::new(),
        values: Vec::new(),
        trimmed_rank: m,
        ranks_equal: rt.rank() == st.rank(),
        source_rank: rt.rank(),
        target_rank: st.rank(),
        lower_limit,
        upper_limit,
    };
    for nu in grid.points() {
        if nu <= 0.0 && !nonpositive_ok {
            continue;
        }
        // Both are defined: ν > 0, or both spectra strictly positive.
        let (Ok(fr), Ok(fs)) = (f_nu(&rt, nu), f_nu(&st, nu)) else { continue };
        out.nu.push(nu);
        out.f_source.push(fr);
        out.f_target.push(fs);
        out.values.push(fs - fr);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trump {
    Trumps,
    TrumpedBy,
    StronglyIncomparable,
    Equal,
    /// Some `|F| ≤ ε` without any sign change on the grid.
    BoundaryIsoentropic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrumpVerdict {
    pub verdict: Trump,
    /// Decided by odd inversion rank alone.
    pub via_parity: bool,
    pub min_abs_f: f64,
}

/// Catalytic comparability of `r` against `s` (`Trumps` means `r ≻_T s`).
pub fn trump_verdict(r: &Spectrum, s: &Spectrum, grid: &NuGridConfig) -> TrumpVerdict {
    let profile = f_profile(r, s, grid);
    trump_verdict_with_profile(r, s, &profile)
}

/// As [`trump_verdict`], reusing an already computed profile of `(r, s)`.
pub fn trump_verdict_with_profile(r: &Spectrum, s: &Spectrum, profile: &FProfile) -> TrumpVerdict {
    let min_abs_f = profile.min_abs();
    let done = |verdict, via_parity| TrumpVerdict { verdict, via_parity, min_abs_f };
    let outcome = compare(r, s);
    match outcome.relation {
        Relation::Equal => return done(Trump::Equal, false),
        Relation::Majorizes => return done(Trump::Trumps, false),
        Relation::MajorizedBy => return done(Trump::TrumpedBy, false),
        Relation::Incomparable => {}
    }
    if outcome.inversion_rank() % 2 == 1 {
        return done(Trump::StronglyIncomparable, true);
    }
    done(classify_profile(profile), false)
}

/// Sign pattern of a profile, limit signs included.
pub fn classify_profile(profile: &FProfile) -> Trump {
    let (pos, neg, touch) = profile.observed_signs();
    match (pos, neg, touch) {
        (true, true, _) => Trump::StronglyIncomparable,
        (true, false, false) => Trump::Trumps,
        (false, true, false) => Trump::TrumpedBy,
        (false, false, _) if !touch => Trump::Equal,
        _ => Trump::BoundaryIsoentropic,
    }
}

/// A bracketed zero of `F(·, r, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    /// Midpoint of the refined bracket.
    pub nu: f64,
}

fn bisect(eval: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, lo_positive: bool) -> Crossing {
    for _ in 0..400 {
        if hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = eval(mid);
        if fm.is_nan() || fm == 0.0 {
            return Crossing { lo: mid, hi: mid, nu: mid };
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Crossing { lo, hi, nu: 0.5 * (lo + hi) }
}

/// Walks from `start` with `step` until `F` takes the sign `want`, returning
/// the point reached, or `None` if double precision runs out first.
fn walk_to_sign(eval: &impl Fn(f64) -> f64, start: f64, step: impl Fn(f64) -> f64, want: Sign) -> Option<f64> {
    let mut nu = start;
    for _ in 0..2100 {
        nu = step(nu);
        let v = eval(nu);
        if !v.is_finite() || nu == 0.0 || !nu.is_finite() {
            return None;
        }
        // Raw sign: far out in the tails `|F|` legitimately drops below `ε`.
        if (v > 0.0 && want == Sign::Plus) || (v < 0.0 && want == Sign::Minus) {
            return Some(nu);
        }
    }
    None
}

fn strict_sign(v: f64) -> Sign {
    if v > EPS {
        Sign::Plus
    } else if v < -EPS {
        Sign::Minus
    } else {
        Sign::Zero
    }
}

/// Zeros of `F` located between adjacent grid points with opposite strict
/// signs, refined by bisection to relative width `1e-12`; grid points with
/// `|F| ≤ ε` are reported as degenerate brackets. When an end of the grid
/// disagrees with the corresponding limit sign, the search continues beyond
/// it (doubling `|ν|` outwards, or halving towards `0⁺`).
pub fn find_crossings(r: &Spectrum, s: &Spectrum, profile: &FProfile) -> Vec<Crossing> {
    let (rt, st) = trimmed_pair(r, s);
    let eval = |nu: f64| -> f64 {
        match (f_nu(&rt, nu), f_nu(&st, nu)) {
            (Ok(a), Ok(b)) => b - a,
            _ => f64::NAN,
        }
    };
    let mut out = Vec::new();
    let (Some(&first), Some(&last)) = (profile.nu.first(), profile.nu.last()) else { return out };
    let (v_first, v_last) = (profile.values[0], profile.values[profile.values.len() - 1]);
    let lower = profile.lower_limit;
    if strict_sign(v_first) != Sign::Zero && lower != Sign::Zero && strict_sign(v_first) != lower {
        let reached = if profile.source_rank == profile.target_rank {
            walk_to_sign(&eval, first, |nu| if nu >= 0.0 { -1.0 } else { 2.0 * nu }, lower)
        } else {
            walk_to_sign(&eval, first, |nu| 0.5 * nu, lower)
        };
        if let Some(lo) = reached {
            out.push(bisect(&eval, lo, first, lower == Sign::Plus));
        }
    }
    for (i, (&nu, &v)) in profile.nu.iter().zip(&profile.values).enumerate() {
        if v.abs() <= EPS {
            out.push(Crossing { lo: nu, hi: nu, nu });
            continue;
        }
        let Some((&nu2, &v2)) = profile.nu.get(i + 1).zip(profile.values.get(i + 1)) else { continue };
        if v2.abs() <= EPS || (v > 0.0) == (v2 > 0.0) {
            continue;
        }
        out.push(bisect(&eval, nu, nu2, v > 0.0));
    }
    let upper = profile.upper_limit;
    if strict_sign(v_last) != Sign::Zero && upper != Sign::Zero && strict_sign(v_last) != upper {
        let step = |nu: f64| if nu <= 1.0 { 2.0 } else { 2.0 * nu };
        if let Some(hi) = walk_to_sign(&eval, last, step, upper) {
            out.push(bisect(&eval, last, hi, v_last > 0.0));
        }
    }
    out
}

/// Whether `c` catalyses `r → s`, i.e. `r ⊗ c ≻ s ⊗ c`.
pub fn catalyst_check<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>, c: &Spectrum<T>) -> bool {
    let d = r.dim().max(s.dim());
    let outcome = compare(&tensor(&r.padded(d), c), &tensor(&s.padded(d), c));
    matches!(outcome.relation, Relation::Majorizes | Relation::Equal)
}
