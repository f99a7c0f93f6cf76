use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::donaldson::{build_dci, euler_characteristic, validate, Operator};

/// ((x)): x - floor(x) - 1/2 off the integers, 0 on them.
fn sawtooth(x: Rational64) -> Rational64 {
    if x.is_integer() {
        Rational64::zero()
    } else {
        x - x.floor() - Rational64::new(1, 2)
    }
}

/// Exact evaluation through Dedekind-type sawtooth sums: with
/// T(m) = 2p Σ_k ((k/p)) [((qk+m)/p) + ((qk-m)/p)], the cotangent sum
/// equals (T(0) - T(2i))/p.
fn delta_exact(p: i64, q: i64, i: i64) -> i64 {
    let q_inv = inverse_mod(q, p).unwrap();
    let t = |m: i64| -> Rational64 {
        (0..p)
            .map(|k| {
                sawtooth(Rational64::new(k, p))
                    * (sawtooth(Rational64::new(q * k + m, p)) + sawtooth(Rational64::new(q * k - m, p)))
            })
            .sum::<Rational64>()
            * Rational64::from(2 * p)
    };
    let eps = if i > 0 && 2 * i < p { 1 } else { 0 };
    let total = Rational64::new(8 * i * i * q_inv, p) - Rational64::from(eps) + (t(0) - t(2 * i)) / Rational64::from(p);
    assert!(total.is_integer(), "exact delta({}, {}, {}) = {}", p, q, i, total);
    total.to_integer().rem_euclid(8)
}

fn coprime(p: i64, q: i64) -> bool {
    num_integer::gcd(p, q) == 1
}

fn fold(j: i64, p: i64) -> i64 {
    let j = j.rem_euclid(p);
    j.min(p - j)
}

#[test]
fn frozen_values() {
    let table: [(i64, i64, &[i64]); 5] =
        [(5, 1, &[0, 2, 6]), (7, 2, &[0, 4, 2, 0]), (5, 2, &[0, 4, 2]), (3, 1, &[0, 2]), (2, 1, &[0, 4])];
    for (p, q, vals) in table {
        for (i, &v) in vals.iter().enumerate() {
            let i = i as i64;
            assert_eq!(delta_exact(p, q, i), v, "oracle ({}, {}, {})", p, q, i);
            assert_eq!(delta_grading(p, q, i).unwrap(), v, "numeric ({}, {}, {})", p, q, i);
        }
    }
}

#[test]
fn numeric_matches_exact_oracle_up_to_15() {
    for p in 2..=15 {
        for q in (1..p).filter(|&q| coprime(p, q)) {
            for i in 0..=p / 2 {
                assert_eq!(delta_grading(p, q, i).unwrap(), delta_exact(p, q, i), "({}, {}, {})", p, q, i);
            }
        }
    }
}

#[test]
fn delta_identities() {
    for p in 2..=15 {
        for q in (1..p).filter(|&q| coprime(p, q)) {
            let qq = inverse_mod(q, p).unwrap();
            assert_eq!(delta_exact(p, q, 0), 0);
            if p % 4 == 0 {
                assert_eq!(delta_exact(p, q, p / 2), 0);
            }
            if p % 4 == 2 {
                assert_eq!(delta_exact(p, q, p / 2), 4);
            }
            for i in 0..=p / 2 {
                let d = delta_exact(p, q, i);
                assert_eq!(d % 2, 0);
                if i > 0 && 2 * i < p {
                    assert_eq!(d, (-delta_exact(p, p - q, i) - 2).rem_euclid(8), "reflection ({}, {}, {})", p, q, i);
                }
                assert_eq!(delta_exact(p, q, fold(q * i, p)), delta_exact(p, qq, i), "q-twist ({}, {}, {})", p, q, i);
            }
        }
    }
}

#[test]
fn delta_rejects_bad_parameters() {
    assert!(matches!(delta_grading(5, 0, 1), Err(DeltaError::InvalidParams { .. })));
    assert!(matches!(delta_grading(6, 2, 1), Err(DeltaError::InvalidParams { .. })));
    assert!(matches!(delta_grading(5, 1, 3), Err(DeltaError::InvalidParams { .. })));
    assert_eq!(inverse_mod(2, 7), Some(4));
}

#[test]
fn delta_is_stable_in_precision() {
    for digits in [50, 80] {
        assert_eq!(delta_grading_with(13, 5, 4, digits).unwrap(), delta_exact(13, 5, 4));
    }
}

#[test]
fn lens_orbit_layout() {
    let l31 = lens_space(3, 1, Ring::Rationals).unwrap();
    assert_eq!(l31.count(Stab::Full), 1);
    assert_eq!(l31.count(Stab::So2), 1);
    assert_eq!(euler_characteristic(&l31), 3);
    let l21 = lens_space(2, 1, Ring::Rationals).unwrap();
    let g: Vec<i64> = l21.orbits().iter().map(|o| o.grading).collect();
    assert_eq!(g, vec![0, 4]);
    assert!(l21.orbits().iter().all(|o| o.stab == Stab::Full));
    assert_eq!(lens_space(1, 1, Ring::Rationals), Err(CatalogError::TrivialLens));
    assert!(lens_space(4, 2, Ring::Rationals).is_err());
    assert!(lens_space(3, 1, Ring::Integers).is_err());
    for (p, q) in [(2, 1), (3, 1), (5, 1), (7, 2), (5, 2), (8, 3), (9, 4)] {
        let l = lens_space(p, q, Ring::Rationals).unwrap();
        assert!(validate(&l).is_empty());
        assert_eq!(euler_characteristic(&l), p);
    }
}

#[test]
fn poincare_sphere_shape() {
    for sign in [1, -1] {
        let d = poincare_sphere(Ring::Rationals, sign).unwrap();
        assert!(validate(&d).is_empty());
        assert_eq!(d.entries(Operator::UFloer).len(), 2);
        let dci = build_dci(&d).unwrap();
        let ranks: Vec<usize> = (0..8).map(|k| dci.keyed.complex.rank(k)).collect();
        assert_eq!(ranks, vec![2, 1, 0, 0, 1, 1, 0, 0]);
    }
    assert_eq!(poincare_sphere(Ring::Rationals, 2), Err(CatalogError::Sign(2)));
}

#[test]
fn synthetic_is_deterministic() {
    let a = synthetic_admissible(7, 6, Ring::Rationals).unwrap();
    let b = synthetic_admissible(7, 6, Ring::Rationals).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn synthetic_data_are_valid(seed in 0u64..10_000, n in 1usize..9, fp in proptest::bool::ANY) {
        let ring = if fp { Ring::PrimeField(5) } else { Ring::Rationals };
        let d = synthetic_admissible(seed, n, ring).unwrap();
        prop_assert!(validate(&d).is_empty(), "{:?}", validate(&d));
        let bd = d.operator(Operator::Boundary);
        prop_assert!(bd.mul(bd).is_zero());
        let u = d.operator(Operator::UFloer);
        prop_assert_eq!(u.mul(bd), bd.mul(u));
    }
}
