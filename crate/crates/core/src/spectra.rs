//! Sorted probability spectra and the majorization preorder.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::weight::{parse_rational, Rational, Weight};

/// A probability vector sorted nonincreasingly (a point of the Weyl chamber).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Weight = f64> {
    weights: Vec<T>,
    rank: usize,
}

fn descending<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    b.partial_cmp(a).unwrap_or(Ordering::Equal)
}

fn count_rank<T: Weight>(weights: &[T]) -> usize {
    let tol = T::tolerance();
    weights.iter().filter(|w| **w > tol).count()
}

impl<T: Weight> Spectrum<T> {
    /// Builds a spectrum from arbitrary-order weights, sorting them descending.
    ///
    /// Entries down to `-tolerance` are clamped to zero. With `normalize` the
    /// weights are divided by their sum, otherwise the sum must already be 1.
    pub fn new(values: &[T], normalize: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let tol = T::tolerance();
        let mut weights = Vec::with_capacity(values.len());
        for v in values {
            if !v.to_f64_lossy().is_finite() && v.to_f64().is_some() {
                return Err(Error::Parse(v.to_string()));
            }
            if !matches!(v.partial_cmp(&-tol.clone()), Some(Ordering::Greater | Ordering::Equal)) {
                return Err(Error::NegativeWeight(v.to_string()));
            }
            weights.push(if *v < T::zero() { T::zero() } else { v.clone() });
        }
        let total = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
        if normalize {
            if total <= T::zero() {
                return Err(Error::ZeroSum);
            }
            for w in &mut weights {
                *w = w.clone() / total.clone();
            }
        } else if (total.clone() - T::one()).abs() > tol {
            return Err(Error::NotNormalized(total.to_string()));
        }
        weights.sort_by(descending);
        Ok(Self::from_sorted(weights))
    }

    /// Wraps normalized weights that are sorted up to rounding.
    pub(crate) fn from_sorted(mut weights: Vec<T>) -> Self {
        if !is_nonincreasing(&weights) {
            weights.sort_by(descending);
        }
        let rank = count_rank(&weights);
        Self { weights, rank }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Number of weights above the zero threshold.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn largest(&self) -> &T {
        &self.weights[0]
    }

    pub fn smallest(&self) -> &T {
        &self.weights[self.weights.len() - 1]
    }

    /// Embeds into dimension `d` by appending zeros; never truncates.
    pub fn padded(&self, d: usize) -> Self {
        let mut weights = self.weights.clone();
        if d > weights.len() {
            weights.resize(d, T::zero());
        }
        Self { weights, rank: self.rank }
    }

    /// Keeps the first `m` weights (used after dropping shared trailing zeros).
    pub fn truncated(&self, m: usize) -> Self {
        Self::from_sorted(self.weights[..m.min(self.dim())].to_vec())
    }

    /// Cumulative sums `A_1, …, A_d`.
    pub fn partial_sums(&self) -> Vec<T> {
        let mut acc = T::zero();
        self.weights
            .iter()
            .map(|w| {
                acc = acc.clone() + w.clone();
                acc.clone()
            })
            .collect()
    }

    /// Tail sums `A'_j = 1 - A_{j-1}` (so `A'_1 = 1`).
    pub fn tail_sums(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.dim());
        let mut acc = T::zero();
        for w in self.weights.iter().rev() {
            acc = acc + w.clone();
            out.push(acc.clone());
        }
        out.reverse();
        out
    }

    /// Exact rational image. Floats map to their dyadic values, so the sum may
    /// differ from 1 by rounding; chart geometry only reads the first `d - 1` entries.
    pub fn to_exact(&self) -> Spectrum<Rational> {
        Spectrum::from_sorted(self.weights.iter().map(Weight::to_exact).collect())
    }

    pub fn to_f64(&self) -> Spectrum<f64> {
        Spectrum::from_sorted(self.weights.iter().map(Weight::to_f64_lossy).collect())
    }
}

impl Spectrum<f64> {
    /// Vertices `(j/d, A_j)` of the Lorenz curve, starting at the origin.
    pub fn lorenz(&self) -> Vec<(f64, f64)> {
        let d = self.dim() as f64;
        core::iter::once((0.0, 0.0))
            .chain(self.partial_sums().into_iter().enumerate().map(|(j, a)| ((j + 1) as f64 / d, a)))
            .collect()
    }
}

impl Spectrum<Rational> {
    /// Parses decimal or `p/q` strings into an exact spectrum.
    pub fn parse<S: AsRef<str>>(values: &[S], normalize: bool) -> Result<Self> {
        let parsed = values.iter().map(|v| parse_rational(v.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(&parsed, normalize)
    }
}

/// Free-function form of [`Spectrum::partial_sums`].
pub fn partial_sums<T: Weight>(r: &Spectrum<T>) -> Vec<T> {
    r.partial_sums()
}

/// Whether the raw input was already nonincreasing.
pub fn is_nonincreasing<T: PartialOrd>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[0] >= w[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    Majorizes,
    MajorizedBy,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Self {
        match s.cmp(&0) {
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }
}

/// Full result of comparing two spectra through their partial sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonOutcome {
    pub relation: Relation,
    /// Comparable with a coincidence `A_j(r) = A_j(s)` at some `j < d`.
    pub exact: bool,
    /// Signs of `A_j(r) - A_j(s)`, `j = 1..=d`.
    pub signs: Vec<Sign>,
    /// One-based positions where the strict sign flips, zeros skipped.
    pub inversion_indices: Vec<usize>,
}

impl ComparisonOutcome {
    pub fn from_signs(signs: Vec<Sign>) -> Self {
        let has_plus = signs.contains(&Sign::Plus);
        let has_minus = signs.contains(&Sign::Minus);
        let relation = match (has_plus, has_minus) {
            (true, true) => Relation::Incomparable,
            (true, false) => Relation::Majorizes,
            (false, true) => Relation::MajorizedBy,
            (false, false) => Relation::Equal,
        };
        Self::with_relation(relation, signs)
    }

    /// Assembles an outcome whose relation was decided elsewhere.
    pub(crate) fn with_relation(relation: Relation, signs: Vec<Sign>) -> Self {
        let d = signs.len();
        let coincidence = signs[..d.saturating_sub(1)].contains(&Sign::Zero);
        let exact = relation != Relation::Incomparable && coincidence;
        let mut inversion_indices = Vec::new();
        let mut last = None;
        for (j, s) in signs.iter().enumerate() {
            if *s == Sign::Zero {
                continue;
            }
            if matches!(last, Some(prev) if prev != *s) {
                inversion_indices.push(j + 1);
            }
            last = Some(*s);
        }
        Self { relation, exact, signs, inversion_indices }
    }

    pub fn inversion_rank(&self) -> usize {
        self.inversion_indices.len()
    }

    pub fn is_comparable(&self) -> bool {
        self.relation != Relation::Incomparable
    }

    /// `+-0` style rendering of the sign sequence.
    pub fn sign_string(&self) -> alloc::string::String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }
}

fn padded_pair<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> (Spectrum<T>, Spectrum<T>) {
    let d = r.dim().max(s.dim());
    (r.padded(d), s.padded(d))
}

/// Signs of `A_j(r) - A_j(s)` after zero padding; the last entry is forced to zero.
pub(crate) fn sign_sequence<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> Vec<Sign> {
    let (r, s) = padded_pair(r, s);
    let d = r.dim();
    r.partial_sums()
        .into_iter()
        .zip(s.partial_sums())
        .enumerate()
        .map(|(j, (a, b))| if j + 1 == d { Sign::Zero } else { Sign::from_i8((a - b).sign_tol()) })
        .collect()
}

/// Compares `r` against `s`: `Majorizes` means `r ≻ s`.
pub fn compare<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> ComparisonOutcome {
    ComparisonOutcome::from_signs(sign_sequence(r, s))
}

/// Greatest lower bound: partial sums are the pointwise minimum.
pub fn meet<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> Spectrum<T> {
    let (r, s) = padded_pair(r, s);
    let mut prev = T::zero();
    let mut weights: Vec<T> = r
        .partial_sums()
        .iter()
        .zip(s.partial_sums().iter())
        .map(|(a, b)| {
            let cur = T::min_of(a, b);
            let w = cur.clone() - prev.clone();
            prev = cur;
            if w < T::zero() {
                T::zero()
            } else {
                w
            }
        })
        .collect();
    weights.sort_by(descending);
    Spectrum::from_sorted(weights)
}

/// Product spectrum `r ⊗ s`, sorted.
pub fn tensor<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> Spectrum<T> {
    let mut weights: Vec<T> = r
        .weights()
        .iter()
        .flat_map(|a| s.weights().iter().map(move |b| a.clone() * b.clone()))
        .collect();
    weights.sort_by(descending);
    Spectrum::from_sorted(weights)
}

/// Points per independent RNG stream in chamber sampling.
pub const SAMPLE_BLOCK: usize = 1 << 16;

/// Visits `len` uniform chamber points drawn from stream `block` of `seed`.
///
/// Sampling draws `d` standard exponentials, normalizes and sorts them. The
/// closure receives a reused buffer.
pub fn visit_chamber_block(d: usize, seed: u64, block: u64, len: usize, mut visit: impl FnMut(&[f64])) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut buf = alloc::vec![0.0f64; d];
    for _ in 0..len {
        let mut total = 0.0;
        for x in buf.iter_mut() {
            let u = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
            *x = -libm::log(u);
            total += *x;
        }
        for x in buf.iter_mut() {
            *x /= total;
        }
        buf.sort_unstable_by(descending);
        visit(&buf);
    }
}

/// Number of blocks and the length of block `b` for `n` samples.
pub fn block_layout(n: usize) -> impl Iterator<Item = (u64, usize)> {
    let blocks = n.div_ceil(SAMPLE_BLOCK);
    (0..blocks).map(move |b| (b as u64, SAMPLE_BLOCK.min(n - b * SAMPLE_BLOCK)))
}

/// `n` i.i.d. uniform points of the Weyl chamber, deterministic in `seed`.
pub fn sample_chamber(d: usize, n: usize, seed: u64) -> Result<Vec<Spectrum>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    let mut out = Vec::with_capacity(n);
    for (block, len) in block_layout(n) {
        visit_chamber_block(d, seed, block, len, |x| out.push(Spectrum::from_sorted(x.to_vec())));
    }
    Ok(out)
}
