//! Canonical spectral families with closed-form majorization predicates.
//!
//! `u(k)` puts weight `1/k` on `k` levels; `χ(q) = (1-q) u(1) + q u(d)` is the
//! depolarized pure spectrum. Against `u(k)` majorization reduces to a rank
//! test and a largest-weight test; against `χ(q)` to largest- and
//! smallest-weight tests.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::spectra::{compare, sign_sequence, ComparisonOutcome, Relation, Spectrum};
use crate::weight::Weight;

fn check_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::KOutOfRange { k, max });
    }
    Ok(())
}

fn check_unit<T: Weight>(q: &T, err: fn(alloc::string::String) -> Error) -> Result<()> {
    if *q < T::zero() || *q > T::one() {
        return Err(err(alloc::string::ToString::to_string(q)));
    }
    Ok(())
}

fn from_n<T: Weight>(n: usize) -> T {
    T::from_usize(n).expect("dimension fits the scalar type")
}

/// `u(k)` embedded in dimension `d`.
pub fn uniform<T: Weight>(k: usize, d: usize) -> Result<Spectrum<T>> {
    check_k(k, d)?;
    let w = T::one() / from_n::<T>(k);
    let mut weights = alloc::vec![T::zero(); d];
    for x in weights.iter_mut().take(k) {
        *x = w.clone();
    }
    Ok(Spectrum::from_sorted(weights))
}

/// `χ(q)` in dimension `d`.
pub fn chi<T: Weight>(q: T, d: usize) -> Result<Spectrum<T>> {
    if d == 0 {
        return Err(Error::InvalidDimension(d));
    }
    check_unit(&q, Error::QOutOfRange)?;
    let tail = q.clone() / from_n::<T>(d);
    let mut weights = alloc::vec![tail.clone(); d];
    weights[0] = T::one() - q + tail;
    Ok(Spectrum::from_sorted(weights))
}

/// Boltzmann-partition analog `(1 - k/N) u(1) + (k/N) u(k)` in dimension `N`.
pub fn boltzmann_spectrum<T: Weight>(n: usize, k: usize) -> Result<Spectrum<T>> {
    check_k(k, n)?;
    let unit = T::one() / from_n::<T>(n);
    let mut weights = alloc::vec![T::zero(); n];
    for x in weights.iter_mut().take(k).skip(1) {
        *x = unit.clone();
    }
    weights[0] = T::one() - from_n::<T>(k - 1) * unit;
    Ok(Spectrum::from_sorted(weights))
}

/// Family descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Family<T: Weight = f64> {
    Uniform { k: usize, d: usize },
    DepolarizedPure { q: T, d: usize },
    Boltzmann { n: usize, k: usize },
}

/// A family member together with its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPoint<T: Weight = f64> {
    pub family: Family<T>,
    pub spectrum: Spectrum<T>,
}

impl<T: Weight> Family<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Family::Uniform { .. } => "uniform",
            Family::DepolarizedPure { .. } => "depolarized_pure",
            Family::Boltzmann { .. } => "boltzmann",
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        match self {
            Family::Uniform { k, d } => uniform(*k, *d),
            Family::DepolarizedPure { q, d } => chi(q.clone(), *d),
            Family::Boltzmann { n, k } => boltzmann_spectrum(*n, *k),
        }
    }

    pub fn point(self) -> Result<FamilyPoint<T>> {
        let spectrum = self.spectrum()?;
        Ok(FamilyPoint { family: self, spectrum })
    }
}

fn relation_from(r_over: bool, over_r: bool) -> Relation {
    match (r_over, over_r) {
        (true, true) => Relation::Equal,
        (true, false) => Relation::Majorizes,
        (false, true) => Relation::MajorizedBy,
        (false, false) => Relation::Incomparable,
    }
}

/// `r` against `u(k)`: `r ≻ u` iff `rank(r) ≤ k`, `u ≻ r` iff `r_1 ≤ 1/k`.
pub fn compare_with_uniform<T: Weight>(r: &Spectrum<T>, k: usize) -> Result<ComparisonOutcome> {
    let u = uniform::<T>(k, r.dim())?;
    let r_over = r.rank() <= k;
    let over_r = r.largest().clone() <= u.largest().clone() + T::tolerance();
    Ok(ComparisonOutcome::with_relation(relation_from(r_over, over_r), sign_sequence(r, &u)))
}

/// `r` against `χ(q)`: `r ≻ χ` iff `r_1 ≥ χ_1`, `χ ≻ r` iff `r_d ≥ χ_d`.
pub fn compare_with_chi<T: Weight>(r: &Spectrum<T>, q: T) -> Result<ComparisonOutcome> {
    let c = chi(q, r.dim())?;
    let tol = T::tolerance();
    let r_over = r.largest().clone() >= c.largest().clone() - tol.clone();
    let over_r = r.smallest().clone() >= c.smallest().clone() - tol;
    Ok(ComparisonOutcome::with_relation(relation_from(r_over, over_r), sign_sequence(r, &c)))
}

/// Tightest depolarized-pure spectra above and below `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepolarizationBounds<T: Weight = f64> {
    /// `χ(d s_d)`, which exactly majorizes `s`.
    pub upper: Spectrum<T>,
    /// `χ(d (1 - s_1) / (d - 1))`, exactly majorized by `s`.
    pub lower: Spectrum<T>,
    pub q_upper: T,
    pub q_lower: T,
}

fn clamp_unit<T: Weight>(q: T) -> T {
    T::max_of(&T::zero(), &T::min_of(&q, &T::one()))
}

pub fn depolarization_bounds<T: Weight>(s: &Spectrum<T>) -> DepolarizationBounds<T> {
    let d = s.dim();
    let (q_upper, q_lower) = if d == 1 {
        (T::zero(), T::zero())
    } else {
        let dn = from_n::<T>(d);
        (
            clamp_unit(dn.clone() * s.smallest().clone()),
            clamp_unit(dn * (T::one() - s.largest().clone()) / from_n::<T>(d - 1)),
        )
    };
    DepolarizationBounds {
        upper: chi(q_upper.clone(), d).expect("q clamped to [0, 1]"),
        lower: chi(q_lower.clone(), d).expect("q clamped to [0, 1]"),
        q_upper,
        q_lower,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorollaryOutcome {
    ImpliesMajorizes,
    ImpliesMajorizedBy,
    Inconclusive,
}

/// Sufficient conditions: `r_1 ≥ 1 + (1-d) s_d ⇒ r ≻ s` and
/// `r_d ≥ (1 - s_1)/(d - 1) ⇒ s ≻ r`.
pub fn corollary_check<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> Result<CorollaryOutcome> {
    let d = r.dim();
    if s.dim() != d {
        return Err(Error::DimensionMismatch(d, s.dim()));
    }
    if d == 1 {
        return Ok(CorollaryOutcome::ImpliesMajorizes);
    }
    let tol = T::tolerance();
    let upper_first = T::one() - from_n::<T>(d - 1) * s.smallest().clone();
    if r.largest().clone() >= upper_first - tol.clone() {
        return Ok(CorollaryOutcome::ImpliesMajorizes);
    }
    let lower_last = (T::one() - s.largest().clone()) / from_n::<T>(d - 1);
    if r.smallest().clone() >= lower_last - tol {
        return Ok(CorollaryOutcome::ImpliesMajorizedBy);
    }
    Ok(CorollaryOutcome::Inconclusive)
}

/// Convex weights `p` with `r = Σ p_k u(k)`: `p_k = k (r_k - r_{k+1})`, `p_d = d r_d`.
pub fn decompose_uniform<T: Weight>(r: &Spectrum<T>) -> Vec<T> {
    let w = r.weights();
    let d = w.len();
    (0..d)
        .map(|i| {
            let next = if i + 1 < d { w[i + 1].clone() } else { T::zero() };
            from_n::<T>(i + 1) * (w[i].clone() - next)
        })
        .collect()
}

/// Whether a generic comparison agrees with a predicate-built one.
pub fn agrees_with_generic<T: Weight>(fast: &ComparisonOutcome, r: &Spectrum<T>, other: &Spectrum<T>) -> bool {
    compare(r, other).relation == fast.relation
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{parse_rational, Rational};
    use num_traits::One;

    fn sp(v: &[f64]) -> Spectrum {
        Spectrum::new(v, false).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(uniform::<f64>(2, 4).unwrap().weights(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(uniform::<f64>(1, 3).unwrap().weights(), &[1.0, 0.0, 0.0]);
        assert_eq!(uniform::<f64>(4, 4).unwrap().rank(), 4);
        assert_eq!(uniform::<f64>(0, 4), Err(Error::KOutOfRange { k: 0, max: 4 }));
        assert_eq!(uniform::<f64>(5, 4), Err(Error::KOutOfRange { k: 5, max: 4 }));
    }

    #[test]
    fn chi_examples() {
        assert!(close(chi(0.4, 4).unwrap().weights(), &[0.7, 0.1, 0.1, 0.1]));
        assert_eq!(chi(0.0, 3).unwrap(), uniform(1, 3).unwrap());
        let exact = chi(Rational::one(), 3).unwrap();
        assert_eq!(exact, uniform::<Rational>(3, 3).unwrap());
        assert!(matches!(chi(1.5, 3), Err(Error::QOutOfRange(_))));
        assert!(matches!(chi(-0.1, 3), Err(Error::QOutOfRange(_))));
    }

    #[test]
    fn boltzmann_examples() {
        assert!(close(boltzmann_spectrum::<f64>(4, 2).unwrap().weights(), &[0.75, 0.25, 0.0, 0.0]));
        assert_eq!(boltzmann_spectrum::<f64>(4, 1).unwrap(), uniform(1, 4).unwrap());
        assert!(close(boltzmann_spectrum::<f64>(5, 5).unwrap().weights(), uniform::<f64>(5, 5).unwrap().weights()));
        assert!(boltzmann_spectrum::<f64>(3, 4).is_err());
    }

    #[test]
    fn uniform_predicates() {
        let r = sp(&[0.4, 0.4, 0.1, 0.1]);
        assert_eq!(compare_with_uniform(&r, 2).unwrap().relation, Relation::MajorizedBy);
        let u2 = uniform::<f64>(2, 4).unwrap();
        assert_eq!(compare_with_uniform(&u2, 3).unwrap().relation, Relation::Majorizes);
        assert_eq!(compare_with_uniform(&r, 4).unwrap().relation, Relation::Majorizes);
        assert_eq!(compare_with_uniform(&u2, 2).unwrap().relation, Relation::Equal);
        let inc = compare_with_uniform(&sp(&[0.6, 0.2, 0.1, 0.1]), 2).unwrap();
        assert_eq!(inc.relation, Relation::Incomparable);
        assert_eq!(inc.inversion_rank(), 1);
        assert!(compare_with_uniform(&r, 5).is_err());
    }

    #[test]
    fn chi_predicates_on_bound_pair() {
        let s = sp(&[0.61, 0.20, 0.13, 0.06]);
        let upper = compare_with_chi(&s, 0.24).unwrap();
        assert_eq!(upper.relation, Relation::MajorizedBy);
        assert!(upper.exact);
        let lower = compare_with_chi(&s, 0.52).unwrap();
        assert_eq!(lower.relation, Relation::Majorizes);
        assert!(lower.exact);
        let mid = compare_with_chi(&s, 0.4).unwrap();
        assert_eq!(mid.relation, Relation::Incomparable);
        assert_eq!(mid.inversion_rank(), 1);
    }

    #[test]
    fn bounds_examples() {
        let s = sp(&[0.61, 0.20, 0.13, 0.06]);
        let b = depolarization_bounds(&s);
        assert!(close(b.upper.weights(), &[0.82, 0.06, 0.06, 0.06]));
        assert!(close(b.lower.weights(), &[0.61, 0.13, 0.13, 0.13]));
        assert!((b.q_upper - 0.24).abs() < 1e-12 && (b.q_lower - 0.52).abs() < 1e-12);

        let pure = uniform::<f64>(1, 4).unwrap();
        let b = depolarization_bounds(&pure);
        assert_eq!((b.upper.clone(), b.lower.clone()), (pure.clone(), pure));
        let mixed = uniform::<f64>(4, 4).unwrap();
        let b = depolarization_bounds(&mixed);
        assert!(close(b.upper.weights(), mixed.weights()) && close(b.lower.weights(), mixed.weights()));
    }

    #[test]
    fn exact_bounds() {
        let s = Spectrum::parse(&["0.61", "0.20", "0.13", "0.06"], false).unwrap();
        let b = depolarization_bounds(&s);
        assert_eq!(b.q_upper, parse_rational("0.24").unwrap());
        assert_eq!(b.q_lower, parse_rational("0.52").unwrap());
        assert_eq!(b.upper, Spectrum::parse(&["0.82", "0.06", "0.06", "0.06"], false).unwrap());
        assert_eq!(b.lower, Spectrum::parse(&["0.61", "0.13", "0.13", "0.13"], false).unwrap());
    }

    #[test]
    fn corollary_examples() {
        let s = sp(&[0.61, 0.20, 0.13, 0.06]);
        let r = sp(&[0.85, 0.05, 0.05, 0.05]);
        assert_eq!(corollary_check(&r, &s).unwrap(), CorollaryOutcome::ImpliesMajorizes);
        assert_eq!(compare(&r, &s).relation, Relation::Majorizes);
        let u = uniform::<f64>(4, 4).unwrap();
        assert_eq!(corollary_check(&u, &s).unwrap(), CorollaryOutcome::ImpliesMajorizedBy);
        let a = sp(&[0.4, 0.4, 0.1, 0.1]);
        let b = sp(&[0.58, 0.14, 0.14, 0.14]);
        assert_eq!(corollary_check(&a, &b).unwrap(), CorollaryOutcome::Inconclusive);
        assert!(corollary_check(&a, &sp(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let eta = sp(&[0.5, 0.3, 0.15, 0.05]);
        assert!(close(&decompose_uniform(&eta), &[0.2, 0.3, 0.3, 0.2]));
        let u3 = uniform::<Rational>(3, 5).unwrap();
        let p = decompose_uniform(&u3);
        for (i, w) in p.iter().enumerate() {
            assert_eq!(*w, if i == 2 { Rational::one() } else { Rational::from_integer(0.into()) });
        }
    }

    #[test]
    fn family_descriptor() {
        let p = Family::DepolarizedPure { q: 0.4, d: 4 }.point().unwrap();
        assert_eq!(p.family.kind(), "depolarized_pure");
        assert!(close(p.spectrum.weights(), &[0.7, 0.1, 0.1, 0.1]));
        assert!(Family::<f64>::Uniform { k: 7, d: 3 }.spectrum().is_err());
    }
}
