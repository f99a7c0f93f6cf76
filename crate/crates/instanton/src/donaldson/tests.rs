use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::catalog::{lens_space, poincare_sphere, sphere, synthetic_admissible};
use crate::exactlinalg::rank;

const Q: Ring = Ring::Rationals;

fn poincare() -> DonaldsonDatum {
    poincare_sphere(Q, 1).unwrap()
}

fn irr_chain(gradings: &[i64]) -> DonaldsonDatum {
    let orbits = gradings.iter().enumerate().map(|(i, &g)| OrbitRecord::new(format!("a{}", i), Stab::Irr, g)).collect();
    DonaldsonDatum::new(Q, orbits)
}

fn cyclic_ranks(c: &crate::gradedcomplex::GradedComplex) -> Vec<usize> {
    (0..PERIOD).map(|k| c.homology(k).unwrap().free_rank()).collect()
}

/// H(C^irr, ∂₁) per ℤ/8 class.
fn floer_ranks(d: &DonaldsonDatum) -> Vec<usize> {
    let irr = d.indices(Stab::Irr);
    let bd = d.operator(Operator::Boundary);
    let at = |k: i64| -> Vec<usize> { (0..irr.len()).filter(|&j| d.orbits()[irr[j]].grading == k.rem_euclid(8)).collect() };
    (0..PERIOD)
        .map(|k| {
            let (src, tgt, up) = (at(k), at(k - 1), at(k + 1));
            let dk = bd.submatrix(&tgt, &src);
            let dk1 = bd.submatrix(&src, &up);
            src.len() - rank(&dk) - rank(&dk1)
        })
        .collect()
}

#[test]
fn validation_accepts_catalog_data() {
    assert!(validate(&poincare()).is_empty());
    assert!(validate(&sphere(Q).unwrap()).is_empty());
    assert!(validate(&lens_space(5, 2, Q).unwrap()).is_empty());
}

#[test]
fn degree_violation() {
    let mut d = irr_chain(&[3, 1]);
    d.set_entry(Operator::Boundary, "a1", "a0", Q.one()).unwrap();
    let v = validate(&d);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind(), "DegreeViolation");
    assert!(matches!(&v[0], Violation::Degree { difference: 2, .. }));
    assert!(matches!(build_dci(&d), Err(DonaldsonError::Invalid(_))));
}

#[test]
fn square_zero_violation() {
    let mut d = irr_chain(&[2, 1, 0]);
    d.set_entry(Operator::Boundary, "a1", "a0", Q.one()).unwrap();
    d.set_entry(Operator::Boundary, "a2", "a1", Q.one()).unwrap();
    let v = validate(&d);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind(), "SquareZeroViolation");
}

#[test]
fn parity_and_ring_violations() {
    let d = DonaldsonDatum::new(
        Q,
        vec![OrbitRecord::new("s", Stab::So2, 0), OrbitRecord::new("t", Stab::So2, 1), OrbitRecord::new("f", Stab::Full, 2)],
    );
    let kinds: Vec<&str> = validate(&d).iter().map(|v| v.kind()).collect();
    assert_eq!(kinds, vec!["ParityViolation", "ParityViolation"]);
    let z = DonaldsonDatum::new(Ring::Integers, vec![OrbitRecord::new("f", Stab::Full, 0)]);
    assert_eq!(validate(&z), vec![Violation::MissingHalf(Ring::Integers)]);
    assert!(matches!(build_dci(&z), Err(DonaldsonError::NeedsHalf(Ring::Integers))));
    assert!(matches!(compute(&z, Flavor::Plus, 24), Err(DonaldsonError::NeedsHalf(_))));
}

#[test]
fn shape_violations() {
    let mut d = irr_chain(&[0, 1]);
    assert!(d.set_operator(Operator::Boundary, ExactMatrix::zeros(Q, 3, 2)).is_err());
    assert!(matches!(d.set_entry(Operator::D1, "a0", "a1", Q.one()), Err(DonaldsonError::WrongType { .. })));
    assert!(matches!(d.set_entry(Operator::Boundary, "zz", "a1", Q.one()), Err(DonaldsonError::UnknownLabel(_))));
    let dup = irr_chain(&[0, 0]);
    let mut orbits = dup.orbits().to_vec();
    orbits[1].label = "a0".into();
    orbits.push(OrbitRecord::new("x", Stab::Irr, 9));
    let kinds: Vec<&str> = validate(&DonaldsonDatum::new(Q, orbits)).iter().map(|v| v.kind()).collect();
    assert_eq!(kinds, vec!["ShapeViolation", "ShapeViolation"]);
}

#[test]
fn dci_of_sphere_and_poincare() {
    let s = build_dci(&sphere(Q).unwrap()).unwrap();
    assert_eq!(cyclic_ranks(&s.keyed.complex), vec![1, 0, 0, 0, 0, 0, 0, 0]);
    let p = build_dci(&poincare()).unwrap();
    assert_eq!(cyclic_ranks(&p.keyed.complex), vec![1, 0, 0, 0, 0, 0, 0, 0]);
    assert!(p.module.validate().is_empty());
    // u acts trivially on homology: the class in degree 0 is θ, and u(θ) = 0
    let u = p.module.action_matrix((3, 0), 0);
    assert!(u.is_zero());
}

#[test]
fn orbit_count_euler_characteristic() {
    assert_eq!(euler_characteristic(&sphere(Q).unwrap()), 1);
    assert_eq!(euler_characteristic(&poincare()), 1);
    assert_eq!(euler_characteristic(&lens_space(5, 1, Q).unwrap()), 5);
    for d in [sphere(Q).unwrap(), poincare(), lens_space(7, 2, Q).unwrap(), lens_space(8, 3, Q).unwrap()] {
        assert_eq!(homology_euler_characteristic(&d).unwrap(), euler_characteristic(&d));
    }
}

#[test]
fn reversal() {
    let s = sphere(Q).unwrap();
    assert_eq!(reverse_orientation(&s), s);
    let p = poincare();
    let r = reverse_orientation(&p);
    let g: Vec<i64> = r.orbits().iter().map(|o| o.grading).collect();
    assert_eq!(g, vec![0, 4, 0]);
    assert_eq!(r.operator(Operator::D2), &p.operator(Operator::D1).transpose());
    assert!(validate(&r).is_empty());
    assert_eq!(reverse_orientation(&r), p);
}

fn check_duality(d: &DonaldsonDatum) {
    let r = reverse_orientation(d);
    assert!(validate(&r).is_empty(), "{:?}", validate(&r));
    let c = build_dci(d).unwrap().keyed.complex;
    let dual = build_dci(&r).unwrap().keyed.complex.dual();
    for k in 0..PERIOD {
        let (a, b) = (c.homology(k).unwrap(), dual.homology(k).unwrap());
        assert_eq!((a.free_rank(), a.torsion()), (b.free_rank(), b.torsion()), "class {}", k);
    }
}

#[test]
fn duality_on_catalog() {
    check_duality(&poincare());
    check_duality(&lens_space(7, 2, Q).unwrap());
    check_duality(&lens_space(6, 1, Q).unwrap());
}

/// Every operator family nonzero, with the d² = 0 relations holding:
/// V₄V₁ + D₂D₁ cancels on a, V₂V₃ against U_Fl∂₁ on e.
fn mixed() -> DonaldsonDatum {
    let mut d = DonaldsonDatum::new(
        Q,
        vec![
            OrbitRecord::new("a", Stab::Irr, 1),
            OrbitRecord::new("c", Stab::Irr, 4),
            OrbitRecord::new("e", Stab::Irr, 3),
            OrbitRecord::new("h", Stab::Irr, 2),
            OrbitRecord::new("g", Stab::Irr, 6),
            OrbitRecord::new("s", Stab::So2, 0),
            OrbitRecord::new("t", Stab::Full, 0),
        ],
    );
    let mut set = |op, t: &str, s: &str, v: i64| d.set_entry(op, t, s, Q.from_i64(v)).unwrap();
    set(Operator::D1, "t", "a", 1);
    set(Operator::V1, "s", "a", 1);
    set(Operator::D2, "c", "t", -1);
    set(Operator::V4, "c", "s", 1);
    set(Operator::V3, "s", "e", 1);
    set(Operator::V2, "g", "s", -1);
    set(Operator::Boundary, "h", "e", 1);
    set(Operator::UFloer, "g", "h", 1);
    d
}

#[test]
fn mixed_datum_is_valid_and_dual() {
    let d = mixed();
    assert!(validate(&d).is_empty(), "{:?}", validate(&d));
    check_duality(&d);
    assert_eq!(homology_euler_characteristic(&d).unwrap(), euler_characteristic(&d));
}

// Closed forms for the inverses of U_Fl + U_alg in the convention where
// U⁺_alg(x U*ⁿ) = (-1)ⁿ x[3] U*ⁿ⁻¹ and U_Fl lifts as (-1)ⁿ U_Fl on the n-th
// copy, checked against that convention directly (no engine code).

fn printed_plus_pair(f: &ExactMatrix, k: usize) -> (ExactMatrix, ExactMatrix) {
    let n = f.rows();
    let id = ExactMatrix::identity(Q, n);
    let pow = |e: usize| (0..e).fold(id.clone(), |acc, _| acc.mul(f));
    // A: C^irr ⊗ U*ⁿ (n = 1..=k) → C^irr[3] ⊗ U*ᵐ (m = 0..k)
    let mut a = ExactMatrix::zeros(Q, n * k, n * k);
    for p in 1..=k {
        let s = Q.sign(p % 2 == 1);
        a.set_block((p - 1) * n, (p - 1) * n, &id.scale(&s));
        if p < k {
            a.set_block(p * n, (p - 1) * n, &f.scale(&s));
        }
    }
    // P(Σ c_j U*ʲ) = Σ_n (Σ_{j≤n} (-1)^{j+1} F^{n-j} c_j) U*ⁿ⁺¹
    let mut p = ExactMatrix::zeros(Q, n * k, n * k);
    for out in 0..k {
        for j in 0..=out {
            p.set_block(out * n, j * n, &pow(out - j).scale(&Q.sign(j % 2 == 0)));
        }
    }
    (a, p)
}

fn printed_minus_pair(f: &ExactMatrix, odd: &[bool], k: usize) -> (ExactMatrix, ExactMatrix) {
    let n = f.rows();
    let pow = |e: usize| (0..e).fold(ExactMatrix::identity(Q, n), |acc, _| acc.mul(f));
    // A: C^irr ⊗ Uᵏ (k = 0..) → C^irr[3] ⊗ U^m (m = 1..=k), modulo U⁰:
    // A(x Uʲ) = (-1)^{|x|+j} x[3] Uʲ⁺¹ + U_Fl x Uʲ with |x| the C^irr degree
    let mut a = ExactMatrix::zeros(Q, n * k, n * k);
    for j in 0..k {
        for x in 0..n {
            a.set(j * n + x, j * n + x, Q.sign(odd[x] ^ (j % 2 == 1)));
        }
        if j >= 1 {
            a.set_block((j - 1) * n, j * n, f);
        }
    }
    // P(x Uⁿ⁺¹) = Σ_{i≤n} (-1)^{(i+1)(|x|+n) + i(i+1)/2} F^i x U^{n-i}, with
    // |x| the degree of x in C^irr[3]
    let mut p = ExactMatrix::zeros(Q, n * k, n * k);
    for nn in 0..k {
        for x in 0..n {
            let xs = if odd[x] { 0 } else { 1 };
            for i in 0..=nn {
                let e = (i + 1) * (xs + nn) + i * (i + 1) / 2;
                let col = pow(i).column(x);
                for (r, v) in col.iter().enumerate() {
                    p.set((nn - i) * n + r, nn * n + x, Q.mul(v, &Q.sign(e % 2 == 1)));
                }
            }
        }
    }
    (a, p)
}

#[test]
fn closed_form_plus_inverse() {
    let f = ExactMatrix::from_i64(Q, &[vec![0, 8], vec![8, 0]]);
    let (a, p) = printed_plus_pair(&f, 6);
    assert_eq!(a.mul(&p), ExactMatrix::identity(Q, 12));
    let zero = ExactMatrix::zeros(Q, 1, 1);
    let (_, p0) = printed_plus_pair(&zero, 1);
    assert_eq!(p0.get(0, 0), &Q.from_i64(-1));
}

#[test]
fn closed_form_minus_inverse_is_negated() {
    let f = ExactMatrix::from_i64(Q, &[vec![0, 8, 0], vec![8, 0, 0], vec![0, 0, 0]]);
    let (a, p) = printed_minus_pair(&f, &[true, true, false], 6);
    assert_eq!(a.mul(&p), ExactMatrix::identity(Q, 18).neg());
}

#[test]
fn engine_inverses() {
    for d in [poincare(), poincare_sphere(Q, -1).unwrap(), mixed(), synthetic_admissible(3, 6, Q).unwrap()] {
        for k in [1, 4, 7] {
            let n = d.count(Stab::Irr) * k;
            assert_eq!(alg_plus_operator(&d, k).unwrap().mul(&p_plus(&d, k).unwrap()), ExactMatrix::identity(Q, n));
            assert_eq!(p_plus(&d, k).unwrap().mul(&alg_plus_operator(&d, k).unwrap()), ExactMatrix::identity(Q, n));
            assert_eq!(alg_minus_operator(&d, k).unwrap().mul(&p_minus(&d, k).unwrap()), ExactMatrix::identity(Q, n));
        }
    }
}

#[test]
fn engine_plus_inverse_without_floer_term() {
    let mut d = irr_chain(&[3, 0]);
    d.set_entry(Operator::Boundary, "a1", "a0", Q.zero()).unwrap();
    let p = p_plus(&d, 1).unwrap();
    // odd generator: U*-contraction carries the sign (-1)^|x|
    assert_eq!(p, ExactMatrix::from_i64(Q, &[vec![-1, 0], vec![0, 1]]));
}

#[test]
fn sphere_towers() {
    let s = sphere(Q).unwrap();
    let plus = build_dci_plus(&s, 7).unwrap();
    let ranks = unrolled_ranks(&s, &plus, 24).unwrap();
    for (d, r) in ranks {
        assert_eq!(r, usize::from(d >= 0 && d % 4 == 0), "degree {}", d);
    }
    let minus = build_dci_minus(&s, 7).unwrap();
    for (d, r) in unrolled_ranks(&s, &minus, 24).unwrap() {
        assert_eq!(r, usize::from(d <= 0 && d % 4 == 0), "degree {}", d);
    }
    // too short to hide the truncation from levels [-8, 8)
    let short = build_dci_minus(&s, 5).unwrap();
    assert!(matches!(unrolled_ranks(&s, &short, 24), Err(DonaldsonError::TruncationTooSmall { .. })));
    assert!(plus.u_defects().is_empty());
    assert!(minus.u_defects().is_empty());
}

#[test]
fn truncation_must_be_positive() {
    assert!(matches!(build_dci_plus(&poincare(), 0), Err(DonaldsonError::TruncationTooSmall { .. })));
    assert!(matches!(compute(&poincare(), Flavor::Plus, 4), Err(DonaldsonError::TruncationTooSmall { .. })));
}

fn reduced_matches(d: &DonaldsonDatum, k: usize) {
    let window = 4 * k as i64 - 8;
    let pairs = [
        (build_dci_plus(d, k).unwrap(), build_reduced_plus(d, k).unwrap()),
        (build_dci_minus(d, k).unwrap(), build_reduced_minus(d, k).unwrap()),
    ];
    for (full, red) in pairs {
        assert!(full.u_defects().is_empty());
        for (_, t, _) in red.u_defects() {
            assert_eq!(t.1, k as i64, "{} defect below the top power", red.flavor);
        }
        assert_eq!(unrolled_ranks(d, &full, window).unwrap(), unrolled_ranks(d, &red, window).unwrap());
    }
}

#[test]
fn reduced_models_match_towers() {
    reduced_matches(&poincare(), 6);
    reduced_matches(&mixed(), 6);
    reduced_matches(&lens_space(7, 2, Q).unwrap(), 5);
}

#[test]
fn reduced_differentials_are_one_sided() {
    for d in [poincare(), mixed()] {
        let plus = build_reduced_plus(&d, 4).unwrap();
        let minus = build_reduced_minus(&d, 4).unwrap();
        for k in 0..PERIOD {
            for (j, i, _) in plus.complex().diff(k).triplets() {
                assert_eq!(plus.keyed.keys(k)[i].0.summand, Summand::Irr, "plus: {:?}", plus.keyed.keys(k - 1)[j]);
            }
            for (j, _, _) in minus.complex().diff(k).triplets() {
                assert_eq!(minus.keyed.keys(k - 1)[j].0.summand, Summand::IrrShift);
            }
        }
    }
}

#[test]
fn poincare_flavors() {
    let d = poincare();
    let tilde = compute(&d, Flavor::Tilde, 24).unwrap();
    let t: Vec<usize> = (0..8).map(|k| tilde.rank(k)).collect();
    assert_eq!(t, vec![1, 0, 0, 0, 0, 0, 0, 0]);

    let plus = compute(&d, Flavor::Plus, 24).unwrap();
    assert!(plus.stabilized);
    for (k, r) in plus.ranks() {
        assert_eq!(r, usize::from(k >= 8 && k % 4 == 0), "plus degree {}", k);
    }

    let minus = compute(&d, Flavor::Minus, 24).unwrap();
    for (k, r) in minus.ranks() {
        let expect = match k {
            4 => 1,
            0 => 2,
            k if k < 0 && k % 4 == 0 => 1,
            _ => 0,
        };
        assert_eq!(r, expect, "minus degree {}", k);
    }
    // U on the degree 4 class: θ-coordinate is D₁ = 1 (up to sign), and the
    // Floer term contributes 8 along β[3]
    let u = &minus.u_maps[&4];
    let gens = &minus.groups[&0].generators;
    let theta = gens.iter().position(|g| g == "theta").unwrap();
    let beta = gens.iter().position(|g| g == "beta[3]").unwrap();
    assert_eq!(Q.mul(u.get(theta, 0), u.get(theta, 0)), Q.one());
    assert_eq!(Q.mul(u.get(beta, 0), u.get(beta, 0)), Q.from_i64(64));
    assert_eq!(minus.groups[&4].generators, vec!["alpha[3]".to_string()]);
}

#[test]
fn poincare_ranks_ignore_floer_sign() {
    for flavor in Flavor::ALL {
        let a = compute(&poincare_sphere(Q, 1).unwrap(), flavor, 16).unwrap();
        let b = compute(&poincare_sphere(Q, -1).unwrap(), flavor, 16).unwrap();
        assert_eq!(a.ranks(), b.ranks());
    }
}

#[test]
fn sphere_tate_is_periodic() {
    let s = sphere(Q).unwrap();
    let tate = compute(&s, Flavor::Tate, 24).unwrap();
    for (k, r) in tate.ranks() {
        assert_eq!(r, usize::from(k.rem_euclid(4) == 0), "degree {}", k);
    }
    assert!(tate.u_invertible());
    let loc = tate_via_localization(&s, 24).unwrap();
    assert_eq!(loc.ranks(), tate.ranks());
}

#[test]
fn lens_tate_matches_localization() {
    for (p, q) in [(2, 1), (3, 1), (5, 1), (7, 2), (5, 2)] {
        let d = lens_space(p, q, Q).unwrap();
        let tate = compute(&d, Flavor::Tate, 16).unwrap();
        assert_eq!(tate.ranks(), tate_via_localization(&d, 16).unwrap().ranks(), "L({}, {})", p, q);
        assert!(tate.u_invertible());
        if p % 2 == 1 {
            for (k, r) in tate.ranks() {
                let expect = if k % 2 == 0 { (p as usize - 1) / 2 + usize::from(k % 4 == 0) } else { 0 };
                assert_eq!(r, expect);
            }
        }
    }
}

#[test]
fn mixed_tate_matches_localization() {
    let d = mixed();
    let tate = compute(&d, Flavor::Tate, 16).unwrap();
    assert_eq!(tate.ranks(), tate_via_localization(&d, 16).unwrap().ranks());
}

#[test]
fn exact_triangle_on_catalog() {
    for d in [sphere(Q).unwrap(), poincare(), lens_space(5, 2, Q).unwrap(), lens_space(6, 1, Q).unwrap(), mixed()] {
        assert_eq!(exact_triangle_defects(&d, 5).unwrap(), Vec::<i64>::new());
    }
    let f3 = poincare_sphere(Ring::PrimeField(3), 1).unwrap();
    assert_eq!(exact_triangle_defects(&f3, 4).unwrap(), Vec::<i64>::new());
}

#[test]
fn poincare_index_spectral_sequence() {
    let ss = index_spectral_sequence(&poincare(), Flavor::Tilde, 6).unwrap().ss;
    let support: Vec<(i64, i64)> = ss.page(1).support().keys().copied().collect();
    assert_eq!(support, vec![(0, 0), (1, 0), (1, 3), (5, 0), (5, 3)]);
    let d1 = ss.page(1).nonzero_differentials();
    assert_eq!(d1.len(), 1);
    assert_eq!(d1[0].0, (1, 0));
    let d4 = ss.page(4).nonzero_differentials();
    assert_eq!(d4.len(), 1);
    assert_eq!(d4[0].0, (5, 0));
    assert_eq!(Q.mul(d4[0].1.get(0, 0), d4[0].1.get(0, 0)), Q.from_i64(64));
    let inf: Vec<(i64, i64)> = ss.page(6).support().keys().copied().collect();
    assert_eq!(inf, vec![(5, 3)]);
}

#[test]
fn equivariant_index_spectral_sequences() {
    let d = poincare();
    for flavor in [Flavor::Plus, Flavor::Minus, Flavor::Tate] {
        let ss = index_spectral_sequence(&d, flavor, 5).unwrap().ss;
        let e1 = ss.page(1).support();
        assert!(!e1.is_empty());
        // differentials only of lengths 1 mod 4
        for r in 1..=5 {
            if !ss.page(r).nonzero_differentials().is_empty() {
                assert_eq!(r % 4, 1, "{} d_{}", flavor, r);
            }
        }
    }
}

fn admissible_checks(d: &DonaldsonDatum) {
    assert!(validate(d).is_empty());
    let tate = compute(d, Flavor::Tate, 16).unwrap();
    assert!(tate.ranks().values().all(|&r| r == 0));
    let plus = compute(d, Flavor::Plus, 16).unwrap();
    let floer = floer_ranks(d);
    for (k, r) in plus.ranks() {
        let expect = if (-4..4).contains(&k) { floer[k.rem_euclid(8) as usize] } else { 0 };
        assert_eq!(r, expect, "degree {}", k);
    }
    check_duality(d);
}

#[test]
fn admissible_examples() {
    for seed in 0..5 {
        admissible_checks(&synthetic_admissible(seed, 7, Q).unwrap());
    }
    admissible_checks(&synthetic_admissible(11, 5, Ring::PrimeField(3)).unwrap());
}

#[test]
fn synthetic_reduced_models_match() {
    for seed in 0..3 {
        reduced_matches(&synthetic_admissible(seed, 6, Q).unwrap(), 5);
    }
}

/// U_Fl swapping two orbits: the Borel tower needs its U* completion, the
/// cycle a0 + a1·U* + a0·U*² + ... having no finite truncation.
fn floer_involution() -> DonaldsonDatum {
    let mut d = irr_chain(&[2, 6]);
    d.set_entry(Operator::UFloer, "a1", "a0", Q.one()).unwrap();
    d.set_entry(Operator::UFloer, "a0", "a1", Q.one()).unwrap();
    d
}

#[test]
fn non_nilpotent_floer_u() {
    let d = floer_involution();
    assert!(validate(&d).is_empty());
    reduced_matches(&d, 5);
    admissible_checks(&d);
    assert_eq!(compute(&d, Flavor::Plus, 16).unwrap().rank(2), 1);
    // the acyclic part of DCI: nothing survives in Ĩ
    assert_eq!(cyclic_ranks(&build_dci(&d).unwrap().keyed.complex), vec![0; 8]);
}

#[test]
fn flavor_names_round_trip() {
    for f in Flavor::ALL {
        assert_eq!(Flavor::from_name(f.name()), Some(f));
    }
    for op in Operator::ALL {
        assert_eq!(Operator::from_name(op.name()), Some(op));
    }
    assert_eq!(Stab::from_name("so2"), Some(Stab::So2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn towers_square_to_zero_and_u_commutes(seed in 0u64..1000, n in 1usize..6) {
        let d = synthetic_admissible(seed, n, Q).unwrap();
        for tower in [build_dci_plus(&d, 3), build_dci_minus(&d, 3), build_dci_tate(&d, 3), build_reduced_plus(&d, 3), build_reduced_minus(&d, 3)] {
            let tower = tower.unwrap();
            let top = if tower.reduced { 3 } else { i64::MAX };
            prop_assert!(tower.u_defects().iter().all(|(_, t, _)| t.1 == top));
        }
        let r = reverse_orientation(&d);
        prop_assert_eq!(reverse_orientation(&r), d);
    }
}

#[test]
fn stabilized_results_agree_across_windows() {
    let d = poincare();
    let a = compute(&d, Flavor::Minus, 16).unwrap();
    let b = compute(&d, Flavor::Minus, 24).unwrap();
    let common: BTreeMap<i64, usize> = a.ranks();
    for (k, r) in common {
        assert_eq!(b.rank(k), r);
    }
}

