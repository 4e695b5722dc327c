//! Incomparability measures: operational (entropy cost of reaching the meet),
//! distance-based (projection onto majorization cones) and algebraic
//! (optimal conversion probability).

use alloc::vec;
use alloc::vec::Vec;

use crate::entropies::shannon;
use crate::error::{Error, Result};
use crate::linalg::{combinations, dot, solve};
use crate::spectra::{compare, meet, Relation, Spectrum};
use crate::weight::Weight;

/// Which argument was moved to reach the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Move up the order: the optimizer majorizes the reference.
    Ascending,
    /// Move down: the optimizer is majorized by the reference.
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Norm {
    #[default]
    Euclidean,
    /// Full `ℓ1` distance; the trace distance is half of the reported value.
    Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    MajorizationCost,
    Operational,
    MajorizationDistance,
    IncomparabilityDistance,
    Algebraic,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::MajorizationCost => "majorization_cost",
            Measure::Operational => "operational",
            Measure::MajorizationDistance => "majorization_distance",
            Measure::IncomparabilityDistance => "incomparability_distance",
            Measure::Algebraic => "algebraic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub measure: Measure,
    pub value: f64,
    pub optimizer: Spectrum,
    pub moved: Party,
    pub direction: Option<Direction>,
    pub method: &'static str,
}

fn padded_pair<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> (Spectrum<T>, Spectrum<T>) {
    let d = r.dim().max(s.dim());
    (r.padded(d), s.padded(d))
}

/// `M(r|s)`: entropy increase of the cheapest posterior of `r` that `s` majorizes.
///
/// Reachable posteriors are exactly the spectra `r` majorizes, so the optimum
/// is the meet of `r` and `s` by Schur-concavity.
pub fn majorization_cost(r: &Spectrum, s: &Spectrum) -> MeasureReport {
    let (r, s) = padded_pair(r, s);
    let star = match compare(&s, &r).relation {
        Relation::Majorizes | Relation::Equal => r.clone(),
        _ => meet(&r, &s),
    };
    let value = (shannon(&star) - shannon(&r)).max(0.0);
    MeasureReport {
        measure: Measure::MajorizationCost,
        value,
        optimizer: star,
        moved: Party::First,
        direction: Some(Direction::Descending),
        method: "meet closed form",
    }
}

/// `I_O = min(M(r|s), M(s|r)) = S(meet) - max(S(r), S(s))`.
pub fn operational_incomparability(r: &Spectrum, s: &Spectrum) -> MeasureReport {
    let a = majorization_cost(r, s);
    let b = majorization_cost(s, r);
    let (mut best, moved) = if a.value <= b.value { (a, Party::First) } else { (b, Party::Second) };
    best.measure = Measure::Operational;
    best.moved = moved;
    best
}

const MAX_ITER: usize = 100_000;
const KKT_TOL: f64 = 1e-9;

/// Constraints `g x ≤ h` (full coordinates) of the chamber intersected with a
/// cone of `s`; `Σ x = 1` is handled separately.
fn cone_constraints(s: &Spectrum, direction: Direction) -> (Vec<Vec<f64>>, Vec<f64>) {
    let d = s.dim();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for i in 0..d - 1 {
        let mut row = vec![0.0; d];
        row[i + 1] = 1.0;
        row[i] = -1.0;
        g.push(row);
        h.push(0.0);
    }
    let mut row = vec![0.0; d];
    row[d - 1] = -1.0;
    g.push(row);
    h.push(0.0);
    let unit = match direction {
        Direction::Descending => 1.0,
        Direction::Ascending => -1.0,
    };
    for (j, a) in s.partial_sums().into_iter().enumerate().take(d - 1) {
        let mut row = vec![0.0; d];
        row[..=j].iter_mut().for_each(|c| *c = unit);
        g.push(row);
        h.push(unit * a);
    }
    (g, h)
}

fn feasible(g: &[Vec<f64>], h: &[f64], x: &[f64], tol: f64) -> bool {
    g.iter().zip(h).all(|(row, b)| dot(row, x) <= b + tol)
}

/// Projection of `target` onto the affine hull fixed by the working set.
/// Returns the point and the multipliers of the working rows.
fn equality_projection(
    target: &[f64],
    g: &[Vec<f64>],
    h: &[f64],
    work: &[usize],
) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = target.len();
    let mut rows: Vec<&[f64]> = Vec::with_capacity(work.len() + 1);
    let ones = vec![1.0; n];
    rows.push(&ones);
    let mut rhs = vec![1.0];
    for &i in work {
        rows.push(&g[i]);
        rhs.push(h[i]);
    }
    let gram = rows.iter().map(|a| rows.iter().map(|b| dot(a, b)).collect()).collect();
    let resid = rows.iter().zip(&rhs).map(|(a, b)| dot(a, target) - b).collect();
    let lambda = solve::<f64>(gram, resid)?;
    let mut y = target.to_vec();
    for (a, l) in rows.iter().zip(&lambda) {
        for (yi, ai) in y.iter_mut().zip(a.iter()) {
            *yi -= l * ai;
        }
    }
    Some((y, lambda[1..].to_vec()))
}

fn independent_with(g: &[Vec<f64>], work: &[usize], candidate: usize) -> bool {
    let n = g[candidate].len();
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0; n]];
    rows.extend(work.iter().map(|&i| g[i].clone()));
    let before = crate::linalg::rank(rows.clone());
    rows.push(g[candidate].clone());
    crate::linalg::rank(rows) > before
}

/// Primal active-set method for `min ½‖x - target‖²` s.t. `g x ≤ h`, `Σx = 1`,
/// started from the feasible point `start`.
fn project_euclidean(target: &[f64], g: &[Vec<f64>], h: &[f64], start: Vec<f64>) -> Result<Vec<f64>> {
    let mut x = start;
    let mut work: Vec<usize> = Vec::new();
    for i in 0..g.len() {
        if (dot(&g[i], &x) - h[i]).abs() <= 1e-12 && independent_with(g, &work, i) {
            work.push(i);
        }
    }
    for _ in 0..MAX_ITER {
        let (y, lambda) =
            equality_projection(target, g, h, &work).ok_or(Error::SolverDidNotConverge(0))?;
        let step: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        if step.iter().all(|p| p.abs() <= 1e-14) {
            let (worst, value) = lambda
                .iter()
                .enumerate()
                .fold((usize::MAX, -KKT_TOL), |acc, (i, l)| if *l < acc.1 { (i, *l) } else { acc });
            if value >= -KKT_TOL || worst == usize::MAX {
                return Ok(y);
            }
            work.remove(worst);
            continue;
        }
        let mut alpha = 1.0;
        let mut blocking = None;
        for i in (0..g.len()).filter(|i| !work.contains(i)) {
            let gp = dot(&g[i], &step);
            if gp > 1e-15 {
                let t = ((h[i] - dot(&g[i], &x)) / gp).max(0.0);
                if t < alpha {
                    alpha = t;
                    blocking = Some(i);
                }
            }
        }
        for (xi, pi) in x.iter_mut().zip(&step) {
            *xi += alpha * pi;
        }
        if let Some(i) = blocking {
            work.push(i);
        }
    }
    Err(Error::SolverDidNotConverge(MAX_ITER))
}

/// Exhaustive `ℓ1` minimization: the optimum of a convex piecewise-linear
/// objective over a polytope sits at a vertex of the arrangement formed by the
/// constraints together with the breakpoints `x_i = target_i`.
fn project_l1(target: &[f64], g: &[Vec<f64>], h: &[f64]) -> Result<Vec<f64>> {
    let d = target.len();
    let mut rows: Vec<Vec<f64>> = g.to_vec();
    let mut rhs: Vec<f64> = h.to_vec();
    for (i, t) in target.iter().enumerate() {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        rows.push(e);
        rhs.push(*t);
    }
    let objective = |x: &[f64]| x.iter().zip(target).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for subset in combinations(rows.len(), d - 1) {
        let mut a = vec![vec![1.0; d]];
        let mut b = vec![1.0];
        for &i in &subset {
            a.push(rows[i].clone());
            b.push(rhs[i]);
        }
        let Some(x) = solve::<f64>(a, b) else { continue };
        if !feasible(g, h, &x, 1e-11) {
            continue;
        }
        let value = objective(&x);
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, x));
        }
    }
    best.map(|(_, x)| x).ok_or(Error::SolverDidNotConverge(0))
}

fn clean_spectrum(x: &[f64]) -> Spectrum {
    let clipped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    Spectrum::new(&clipped, true).expect("projection lies in the simplex")
}

/// `D^←(r|s)` (optimizer majorizes `s`) or `D^→(r|s)` (optimizer majorized by `s`).
pub fn majorization_distance(r: &Spectrum, s: &Spectrum, direction: Direction, norm: Norm) -> Result<MeasureReport> {
    let (r, s) = padded_pair(r, s);
    let (g, h) = cone_constraints(&s, direction);
    let done = |value: f64, optimizer: Spectrum, method| MeasureReport {
        measure: Measure::MajorizationDistance,
        value,
        optimizer,
        moved: Party::First,
        direction: Some(direction),
        method,
    };
    if feasible(&g, &h, r.weights(), crate::EPS) {
        return Ok(done(0.0, r.clone(), "already feasible"));
    }
    let (x, method) = match norm {
        Norm::Euclidean => (project_euclidean(r.weights(), &g, &h, s.weights().to_vec())?, "active-set QP"),
        Norm::Trace => (project_l1(r.weights(), &g, &h)?, "arrangement vertex enumeration (l1)"),
    };
    if !feasible(&g, &h, &x, KKT_TOL) {
        return Err(Error::SolverDidNotConverge(MAX_ITER));
    }
    let value = match norm {
        Norm::Euclidean => libm::sqrt(x.iter().zip(r.weights()).map(|(a, b)| (a - b) * (a - b)).sum()),
        Norm::Trace => x.iter().zip(r.weights()).map(|(a, b)| (a - b).abs()).sum(),
    };
    Ok(done(value, clean_spectrum(&x), method))
}

/// `I_D`: the smallest of the four one-sided majorization distances.
pub fn incomparability_distance(r: &Spectrum, s: &Spectrum, norm: Norm) -> Result<MeasureReport> {
    let mut best: Option<MeasureReport> = None;
    for (moved, a, b) in [(Party::First, r, s), (Party::Second, s, r)] {
        for direction in [Direction::Ascending, Direction::Descending] {
            let mut rep = majorization_distance(a, b, direction, norm)?;
            rep.moved = moved;
            if best.as_ref().is_none_or(|cur| rep.value < cur.value) {
                best = Some(rep);
            }
        }
    }
    let mut best = best.expect("four candidates");
    best.measure = Measure::IncomparabilityDistance;
    Ok(best)
}

/// Optimal probability of converting `source` into `target`:
/// `min_j A'_j(source) / A'_j(target)` over indices with `A'_j(target) > 0`.
pub fn conversion_probability<T: Weight>(target: &Spectrum<T>, source: &Spectrum<T>) -> T {
    let (target, source) = padded_pair(target, source);
    let tol = T::tolerance();
    target
        .tail_sums()
        .into_iter()
        .zip(source.tail_sums())
        .skip(1)
        .filter(|(den, _)| *den > tol)
        .map(|(den, num)| num / den)
        .fold(T::one(), |acc, q| T::min_of(&acc, &q))
}

/// `I_A = 1 - max(Q(r|s), Q(s|r))`.
pub fn algebraic_incomparability<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> T {
    let a = conversion_probability(r, s);
    let b = conversion_probability(s, r);
    T::one() - T::max_of(&a, &b)
}

/// `(1 - μ + μ r_1, μ r_2, …, μ r_d)`.
pub fn feng_stretch<T: Weight>(r: &Spectrum<T>, mu: T) -> Result<Spectrum<T>> {
    if mu < T::zero() || mu > T::one() {
        return Err(Error::MuOutOfRange(alloc::string::ToString::to_string(&mu)));
    }
    let mut weights: Vec<T> = r.weights().iter().map(|w| mu.clone() * w.clone()).collect();
    weights[0] = weights[0].clone() + (T::one() - mu);
    Ok(Spectrum::from_sorted(weights))
}

/// Stretches `r` just enough to majorize `s`: `μ = Q(r|s) = min_j A'_j(s)/A'_j(r)`.
pub fn stretch_to_majorize<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> (T, Spectrum<T>) {
    let d = r.dim().max(s.dim());
    let r = r.padded(d);
    let mu = conversion_probability(&r, s);
    let stretched = feng_stretch(&r, mu.clone()).expect("conversion probability lies in [0, 1]");
    (mu, stretched)
}

/// Whether a measure value is consistent with comparability of the pair.
pub fn is_comparable<T: Weight>(r: &Spectrum<T>, s: &Spectrum<T>) -> bool {
    compare(r, s).is_comparable()
}
