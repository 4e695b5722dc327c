//! Random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weylkit_core::entropies::shannon;
use weylkit_core::geometry::region_polytope;
use weylkit_core::measures::Direction;
use weylkit_core::spectra::Sign;
use weylkit_core::{compare, Spectrum};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the chamber via normalized exponentials.
pub fn random_spectrum(rng: &mut impl Rng, d: usize) -> Spectrum {
    let v: Vec<f64> = (0..d).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    Spectrum::new(&v, true).unwrap()
}

/// Random spectrum of dimension `d` with exactly `rank` nonzero weights.
pub fn random_rank_spectrum(rng: &mut impl Rng, d: usize, rank: usize) -> Spectrum {
    let mut v: Vec<f64> = (0..rank).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3).collect();
    v.resize(d, 0.0);
    Spectrum::new(&v, true).unwrap()
}

/// `Σ_k w_k P_k r` for random permutations, optionally pulled toward `r`.
/// Always majorized by `r`.
pub fn doubly_stochastic_mix(rng: &mut impl Rng, r: &Spectrum, terms: usize, keep: f64) -> Spectrum {
    let d = r.dim();
    let mut out: Vec<f64> = r.weights().iter().map(|w| keep * w).collect();
    let raw: Vec<f64> = (0..terms).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut perm: Vec<usize> = (0..d).collect();
    for w in raw {
        perm.shuffle(rng);
        for (i, &p) in perm.iter().enumerate() {
            out[i] += (1.0 - keep) * w / total * r.weights()[p];
        }
    }
    Spectrum::new(&out, true).unwrap()
}

/// Feasibility of a full-coordinate point for a cone of `s`, with slack.
fn in_cone(x: &[f64], s: &Spectrum, direction: Direction) -> bool {
    if x.windows(2).any(|w| w[0] < w[1]) || *x.last().unwrap() < 0.0 {
        return false;
    }
    let mut acc = 0.0;
    let mut acc_s = 0.0;
    for (xj, sj) in x[..x.len() - 1].iter().zip(s.weights()) {
        acc += xj;
        acc_s += sj;
        let ok = match direction {
            Direction::Descending => acc <= acc_s,
            Direction::Ascending => acc >= acc_s,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Euclidean distance from `r` to a cone of `s` by successively refined grid
/// search in chart coordinates (`d ≤ 4`).
pub fn grid_distance_oracle(r: &Spectrum, s: &Spectrum, direction: Direction) -> f64 {
    let d = r.dim();
    let n = d - 1;
    let dist = |chart: &[f64]| -> Option<f64> {
        let mut x = chart.to_vec();
        x.push(1.0 - chart.iter().sum::<f64>());
        if !in_cone(&x, s, direction) {
            return None;
        }
        Some(x.iter().zip(r.weights()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
    };
    let mut lo = vec![0.0; n];
    let mut hi = vec![1.0; n];
    let per_axis: usize = if n <= 2 { 81 } else { 33 };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..40 {
        let steps: Vec<f64> = (0..n).map(|i| (hi[i] - lo[i]) / (per_axis - 1) as f64).collect();
        let mut idx = vec![0usize; n];
        loop {
            let pt: Vec<f64> = (0..n).map(|i| lo[i] + steps[i] * idx[i] as f64).collect();
            if let Some(v) = dist(&pt) {
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, pt));
                }
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < per_axis {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        let Some((_, center)) = best.clone() else { break };
        for i in 0..n {
            lo[i] = center[i] - 3.0 * steps[i];
            hi[i] = center[i] + 3.0 * steps[i];
        }
        if steps.iter().all(|h| *h < 1e-10) {
            break;
        }
    }
    best.map(|(v, _)| v).unwrap_or(f64::INFINITY)
}

/// Distinct pair with equal Shannon entropy: `r` against a member of the
/// segment from `p` toward `u(d)` tuned by bisection.
pub fn isoentropic_partner(r: &Spectrum, p: &Spectrum) -> Option<Spectrum> {
    let d = r.dim();
    let target = shannon(r);
    let mix = |t: f64| -> Spectrum {
        let v: Vec<f64> = p.weights().iter().map(|w| (1.0 - t) * w + t / d as f64).collect();
        Spectrum::new(&v, true).unwrap()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if shannon(&mix(lo)) > target || shannon(&mix(hi)) < target {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if shannon(&mix(mid)) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = [lo, hi]
        .into_iter()
        .map(mix)
        .min_by(|a, b| (shannon(a) - target).abs().total_cmp(&(shannon(b) - target).abs()))
        .unwrap();
    Some(best)
}

/// Strict prefix-sum signs of `x` against `r`, or `None` on a cell boundary.
pub fn strict_signs(r: &Spectrum, x: &Spectrum) -> Option<Vec<Sign>> {
    let out = compare(x, r);
    let strict = &out.signs[..r.dim() - 1];
    if strict.contains(&Sign::Zero) {
        None
    } else {
        Some(strict.to_vec())
    }
}

/// One convexity trial for sign cells: two random points of dimension 3..=6
/// in the same cell of a random reference, and a random convex combination.
/// `None` when the points fall in different cells; otherwise whether the
/// combination stays in the cell.
pub fn region_convexity_trial(rng: &mut impl Rng) -> Option<bool> {
    let d = 3 + rng.gen_range(0..4);
    let r = random_spectrum(rng, d);
    let x = random_spectrum(rng, d);
    let y = random_spectrum(rng, d);
    let sx = strict_signs(&r, &x)?;
    if strict_signs(&r, &y)? != sx {
        return None;
    }
    let t: f64 = rng.gen();
    let z: Vec<f64> = x.weights().iter().zip(y.weights()).map(|(a, b)| t * a + (1.0 - t) * b).collect();
    let z = Spectrum::new(&z, false).unwrap();
    let in_polytope = region_polytope(&r, &sx).unwrap().contains(&z.weights()[..d - 1]);
    let same_signs = strict_signs(&r, &z).is_none_or(|sz| sz == sx);
    Some(in_polytope && same_signs)
}
