mod support;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use support::{doubly_stochastic_mix, random_spectrum, region_convexity_trial, rng};
use weylkit_core::families::uniform;
use weylkit_core::geometry::{cone_polytope, inconvertibility, region_polytope, volume_exact, HPolytope, Side, VolumeMethod};
use weylkit_core::spectra::{Relation, Sign};
use weylkit_core::{compare, Rational, Spectrum};

fn rational_full_rank(g: &mut impl Rng, d: usize) -> Spectrum<Rational> {
    let v: Vec<Rational> = (0..d).map(|_| Rational::from_integer(BigInt::from(g.gen_range(1..9)))).collect();
    Spectrum::new(&v, true).unwrap()
}

fn chart(s: &Spectrum) -> Vec<f64> {
    s.weights()[..s.dim() - 1].to_vec()
}

#[test]
fn exact_and_monte_carlo_agree() {
    let mut g = rng(61);
    let (mut ok, mut total) = (0, 0);
    for i in 0..50 {
        let d = 3 + i % 3;
        let r = random_spectrum(&mut g, d);
        let exact = inconvertibility(&r, VolumeMethod::Exact).unwrap();
        let mc = inconvertibility(&r, VolumeMethod::MonteCarlo { samples: 100_000, seed: i as u64 }).unwrap();
        for (a, b) in [(&exact.e, &mc.e), (&exact.h, &mc.h), (&exact.c, &mc.c)] {
            total += 1;
            let tol = 3.0 * b.stderr_or_zero().max(1e-5);
            if (a.value - b.value).abs() <= tol {
                ok += 1;
            }
        }
        let sum = exact.c.exact.unwrap() + exact.e.exact.unwrap() + exact.h.exact.unwrap();
        assert!(sum.is_one());
    }
    assert!(ok as f64 >= 0.95 * total as f64, "{ok}/{total}");
}

#[test]
fn region_cells_are_convex() {
    let mut g = rng(62);
    let mut checked = 0;
    for _ in 0..100_000 {
        if let Some(ok) = region_convexity_trial(&mut g) {
            assert!(ok);
            checked += 1;
        }
    }
    assert!(checked > 20_000, "{checked}");
}

#[test]
fn sign_cells_partition_the_chamber() {
    let mut g = rng(63);
    for i in 0..12 {
        let d = 3 + i % 3;
        let r = rational_full_rank(&mut g, d);
        let n = d - 1;
        let mut total = Rational::zero();
        for mask in 0..(1u32 << n) {
            let signs: Vec<Sign> = (0..n).map(|j| if mask >> j & 1 == 1 { Sign::Plus } else { Sign::Minus }).collect();
            total += volume_exact(&region_polytope(&r, &signs).unwrap()).unwrap();
        }
        assert!(total.is_one(), "{r:?}: {total}");
    }
}

#[test]
fn cone_membership_matches_compare() {
    let mut g = rng(64);
    for i in 0..20_000 {
        let d = 2 + i % 6;
        let r = random_spectrum(&mut g, d);
        let x = if i % 2 == 0 { doubly_stochastic_mix(&mut g, &r, 2, 0.3) } else { random_spectrum(&mut g, d) };
        let rel = compare(&r, &x).relation;
        let lower = cone_polytope(&r, Side::Lower).contains(&chart(&x));
        let upper = cone_polytope(&r, Side::Upper).contains(&chart(&x));
        assert_eq!(lower, matches!(rel, Relation::Majorizes | Relation::Equal));
        assert_eq!(upper, matches!(rel, Relation::MajorizedBy | Relation::Equal));
    }
}

#[test]
fn chamber_contains_sampled_points() {
    let mut g = rng(65);
    for d in 2..=7 {
        let ch = HPolytope::<f64>::chamber(d);
        for _ in 0..1000 {
            assert!(ch.contains(&chart(&random_spectrum(&mut g, d))));
        }
    }
}

#[test]
fn cone_volumes_are_monotone() {
    let mut g = rng(66);
    for i in 0..30 {
        let d = 3 + i % 2;
        let r = rational_full_rank(&mut g, d);
        // Average with the uniform spectrum: a strictly majorized full-rank partner.
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let u = uniform::<Rational>(d, d).unwrap();
        let w: Vec<Rational> = r.weights().iter().zip(u.weights()).map(|(a, b)| half.clone() * (a + b)).collect();
        let lower = Spectrum::new(&w, false).unwrap();
        assert!(matches!(compare(&r, &lower).relation, Relation::Majorizes | Relation::Equal));
        let hi = inconvertibility(&r, VolumeMethod::Exact).unwrap();
        let lo = inconvertibility(&lower, VolumeMethod::Exact).unwrap();
        assert!(hi.e.exact.unwrap() >= lo.e.exact.unwrap());
        assert!(hi.h.exact.unwrap() <= lo.h.exact.unwrap());
    }
}

#[test]
fn apex_closed_form() {
    for d in 3..=5usize {
        let rep = inconvertibility(&uniform::<Rational>(d - 1, d).unwrap(), VolumeMethod::Exact).unwrap();
        let expected = Rational::one() - Rational::new(BigInt::one(), BigInt::from(d - 1).pow((d - 1) as u32));
        assert_eq!(rep.c.exact.unwrap(), expected);
    }
}
