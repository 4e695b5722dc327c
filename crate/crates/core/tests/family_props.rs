mod support;

use num_bigint::BigInt;
use rand::Rng;
use support::{random_rank_spectrum, random_spectrum, rng};
use weylkit_core::families::{
    chi, compare_with_chi, compare_with_uniform, corollary_check, decompose_uniform, depolarization_bounds, uniform,
    CorollaryOutcome,
};
use weylkit_core::spectra::Relation;
use weylkit_core::{compare, Rational, Spectrum};

fn rational_spectrum(g: &mut impl Rng, d: usize, zeros: bool) -> Spectrum<Rational> {
    let lo = if zeros { 0 } else { 1 };
    let mut v: Vec<Rational> = (0..d).map(|_| Rational::from_integer(BigInt::from(g.gen_range(lo..6)))).collect();
    if v.iter().all(|x| *x == Rational::from_integer(BigInt::from(0))) {
        v[0] = Rational::from_integer(BigInt::from(1));
    }
    Spectrum::new(&v, true).unwrap()
}

fn random_q(g: &mut impl Rng) -> Rational {
    let den: i64 = g.gen_range(1..13);
    Rational::new(BigInt::from(g.gen_range(0..=den)), BigInt::from(den))
}

#[test]
fn fast_predicates_match_generic_compare_floats() {
    let mut g = rng(51);
    let mut incomparable = 0;
    for i in 0..100_000 {
        let d = 2 + i % 7;
        let rank = g.gen_range(1..=d);
        let r = if i % 4 == 0 { random_rank_spectrum(&mut g, d, rank) } else { random_spectrum(&mut g, d) };
        let k = g.gen_range(1..=d);
        let q: f64 = g.gen();
        let u = uniform::<f64>(k, d).unwrap();
        let c = chi(q, d).unwrap();
        for (fast, other) in [(compare_with_uniform(&r, k).unwrap(), u), (compare_with_chi(&r, q).unwrap(), c)] {
            let slow = compare(&r, &other);
            assert_eq!(fast.relation, slow.relation, "{r:?} vs {other:?}");
            if fast.relation == Relation::Incomparable {
                incomparable += 1;
                assert_eq!(fast.inversion_rank(), 1);
            }
        }
    }
    assert!(incomparable > 10_000);
}

#[test]
fn fast_predicates_match_generic_compare_exact() {
    let mut g = rng(52);
    for i in 0..20_000 {
        let d = 2 + i % 7;
        let r = rational_spectrum(&mut g, d, true);
        let k = g.gen_range(1..=d);
        let q = random_q(&mut g);
        let u = uniform::<Rational>(k, d).unwrap();
        let c = chi(q.clone(), d).unwrap();
        for (fast, other) in [(compare_with_uniform(&r, k).unwrap(), u), (compare_with_chi(&r, q.clone()).unwrap(), c)] {
            let slow = compare(&r, &other);
            assert_eq!(fast.relation, slow.relation);
            assert_eq!(fast.signs, slow.signs);
            if fast.relation == Relation::Incomparable {
                assert_eq!(fast.inversion_rank(), 1);
            }
        }
    }
}

#[test]
fn uniform_chain() {
    for d in 1..=9 {
        for k in 1..d {
            let a = uniform::<Rational>(k, d).unwrap();
            let b = uniform::<Rational>(k + 1, d).unwrap();
            assert_eq!(compare(&a, &b).relation, Relation::Majorizes);
        }
    }
}

#[test]
fn decomposition_reconstructs_spectrum() {
    let mut g = rng(53);
    for i in 0..2000 {
        let d = 1 + i % 8;
        let r = rational_spectrum(&mut g, d, true);
        let p = decompose_uniform(&r);
        let mut sum = Rational::from_integer(BigInt::from(0));
        let mut rebuilt = vec![sum.clone(); d];
        for (k, pk) in p.iter().enumerate() {
            assert!(*pk >= Rational::from_integer(BigInt::from(0)));
            sum += pk.clone();
            let u = uniform::<Rational>(k + 1, d).unwrap();
            for (x, w) in rebuilt.iter_mut().zip(u.weights()) {
                *x += pk.clone() * w.clone();
            }
        }
        assert_eq!(sum, Rational::from_integer(BigInt::from(1)));
        assert_eq!(rebuilt.as_slice(), r.weights());
    }
}

#[test]
fn bounds_sandwich_exactly() {
    let mut g = rng(54);
    for i in 0..5000 {
        let d = 2 + i % 7;
        let s = rational_spectrum(&mut g, d, i % 3 == 0);
        let b = depolarization_bounds(&s);
        assert!(b.q_upper <= b.q_lower);
        let up = compare(&b.upper, &s);
        let low = compare(&s, &b.lower);
        for out in [&up, &low] {
            assert!(matches!(out.relation, Relation::Majorizes | Relation::Equal));
            assert!(out.exact || out.relation == Relation::Equal);
        }
    }
}

#[test]
fn chi_between_bounds_is_incomparable() {
    let mut g = rng(55);
    for i in 0..5000 {
        let d = 3 + i % 6;
        let s = random_spectrum(&mut g, d);
        let b = depolarization_bounds(&s);
        if b.q_lower - b.q_upper < 1e-9 {
            continue;
        }
        let t: f64 = g.gen_range(0.01..0.99);
        let q = b.q_upper + t * (b.q_lower - b.q_upper);
        let c = chi(q, d).unwrap();
        assert_eq!(compare(&s, &c).relation, Relation::Incomparable);
        assert_eq!(compare(&s, &c).inversion_rank(), 1);
    }
}

#[test]
fn corollary_is_sound() {
    let mut g = rng(56);
    let mut decided = 0;
    for i in 0..100_000 {
        let d = 2 + i % 7;
        let rank = 1 + g.gen_range(0..d.min(2));
        let r = if i % 2 == 0 { random_rank_spectrum(&mut g, d, rank) } else { random_spectrum(&mut g, d) };
        let s = random_spectrum(&mut g, d);
        let rel = compare(&r, &s).relation;
        match corollary_check(&r, &s).unwrap() {
            CorollaryOutcome::ImpliesMajorizes => {
                decided += 1;
                assert!(matches!(rel, Relation::Majorizes | Relation::Equal));
            }
            CorollaryOutcome::ImpliesMajorizedBy => {
                decided += 1;
                assert!(matches!(rel, Relation::MajorizedBy | Relation::Equal));
            }
            CorollaryOutcome::Inconclusive => {}
        }
    }
    assert!(decided > 1000, "{decided}");
}

#[test]
fn corollary_is_sound_exact() {
    let mut g = rng(57);
    for i in 0..20_000 {
        let d = 2 + i % 7;
        let r = rational_spectrum(&mut g, d, true);
        let s = rational_spectrum(&mut g, d, true);
        let rel = compare(&r, &s).relation;
        match corollary_check(&r, &s).unwrap() {
            CorollaryOutcome::ImpliesMajorizes => assert!(matches!(rel, Relation::Majorizes | Relation::Equal)),
            CorollaryOutcome::ImpliesMajorizedBy => assert!(matches!(rel, Relation::MajorizedBy | Relation::Equal)),
            CorollaryOutcome::Inconclusive => {}
        }
    }
}
