//! Built-in Donaldson data: S³, lens spaces, the Poincaré sphere, and
//! seeded synthetic data with irreducible orbits only.

mod delta;

#[cfg(test)]
mod tests;

pub use delta::{delta_grading, delta_grading_with, inverse_mod, working_digits, DeltaError, DIGITS_VAR};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::donaldson::{DonaldsonDatum, Operator, OrbitRecord, Stab};
use crate::exactlinalg::{ExactMatrix, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Delta(#[from] DeltaError),
    #[error("L(1, q) is S³; use sphere()")]
    TrivialLens,
    #[error("sign must be +1 or -1, got {0}")]
    Sign(i64),
    #[error("ring {0} does not contain 1/2")]
    NeedsHalf(Ring),
}

fn check_ring(ring: Ring) -> Result<(), CatalogError> {
    if !ring.has_half() {
        return Err(CatalogError::NeedsHalf(ring));
    }
    Ok(())
}

/// One Full orbit at grading 0.
pub fn sphere(ring: Ring) -> Result<DonaldsonDatum, CatalogError> {
    check_ring(ring)?;
    Ok(DonaldsonDatum::new(ring, vec![OrbitRecord::new("theta", Stab::Full, 0)]))
}

/// L(p, q) with the trivial bundle: the trivial connection, SO2 orbits
/// i = 1..⌈p/2⌉-1 at δ(p, q, i), and for even p a second Full orbit at
/// δ(p, q, p/2). All operators vanish.
pub fn lens_space(p: i64, q: i64, ring: Ring) -> Result<DonaldsonDatum, CatalogError> {
    check_ring(ring)?;
    if p == 1 {
        return Err(CatalogError::TrivialLens);
    }
    delta::check_params(p, q, 0)?;
    let mut orbits = vec![OrbitRecord::new("theta", Stab::Full, 0)];
    for i in 1..(p + 1) / 2 {
        orbits.push(OrbitRecord::new(format!("rho{}", i), Stab::So2, delta_grading(p, q, i)?));
    }
    if p % 2 == 0 {
        orbits.push(OrbitRecord::new(format!("theta{}", p / 2), Stab::Full, delta_grading(p, q, p / 2)?));
    }
    Ok(DonaldsonDatum::new(ring, orbits))
}

/// Σ(2,3,5): θ at 0, irreducibles α at 1 and β at 5, D₁(α) = θ and
/// U_Fl exchanging α and β with coefficient 8·sign.
pub fn poincare_sphere(ring: Ring, sign: i64) -> Result<DonaldsonDatum, CatalogError> {
    check_ring(ring)?;
    if sign != 1 && sign != -1 {
        return Err(CatalogError::Sign(sign));
    }
    let mut d = DonaldsonDatum::new(
        ring,
        vec![
            OrbitRecord::new("theta", Stab::Full, 0),
            OrbitRecord::new("alpha", Stab::Irr, 1),
            OrbitRecord::new("beta", Stab::Irr, 5),
        ],
    );
    let set = |d: &mut DonaldsonDatum, op, t: &str, s: &str, v: i64| {
        d.set_entry(op, t, s, ring.from_i64(v)).expect("catalog labels are consistent")
    };
    set(&mut d, Operator::D1, "theta", "alpha", 1);
    set(&mut d, Operator::UFloer, "beta", "alpha", 8 * sign);
    set(&mut d, Operator::UFloer, "alpha", "beta", 8 * sign);
    Ok(d)
}

fn small_unit(rng: &mut ChaCha8Rng, ring: Ring) -> i64 {
    loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 && ring.is_unit(&ring.from_i64(v)) {
            return v;
        }
    }
}

/// Irreducible orbits only, with ∂₁ nilpotent and commuting with U_Fl.
///
/// Orbits come as cycles and as pairs (top, bottom) with bottom one degree
/// lower. In the pair basis ∂₁ sends each top to its bottom and U_Fl is a
/// random degree-4 map built from the blocks that commute with it
/// (cycle→cycle, pair→pair acting equally on tops and bottoms,
/// cycle→bottom, top→cycle). Both are then conjugated by a random
/// unitriangular change of basis within each grading, in a random order.
pub fn synthetic_admissible(seed: u64, n_orbits: usize, ring: Ring) -> Result<DonaldsonDatum, CatalogError> {
    check_ring(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    #[derive(Clone, Copy, PartialEq)]
    enum Role {
        Cycle,
        Top(usize),
        Bottom(usize),
    }
    let mut gradings = Vec::new();
    let mut roles = Vec::new();
    while gradings.len() < n_orbits {
        let g = rng.gen_range(0..8i64);
        if n_orbits - gradings.len() >= 2 && rng.gen_bool(0.5) {
            let t = gradings.len();
            gradings.extend([g, (g - 1).rem_euclid(8)]);
            roles.extend([Role::Top(t + 1), Role::Bottom(t)]);
        } else {
            gradings.push(g);
            roles.push(Role::Cycle);
        }
    }
    let n = gradings.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut bd = ExactMatrix::zeros(ring, n, n);
    for (a, role) in roles.iter().enumerate() {
        if let Role::Top(b) = role {
            bd.set(*b, a, ring.one());
        }
    }
    let mut u = ExactMatrix::zeros(ring, n, n);
    let drop4 = |s: usize, t: usize| (gradings[s] - gradings[t]).rem_euclid(8) == 4;
    for s in 0..n {
        for t in 0..n {
            if !drop4(s, t) || !rng.gen_bool(0.4) {
                continue;
            }
            let v = ring.from_i64(small_unit(&mut rng, ring));
            match (roles[s], roles[t]) {
                (Role::Cycle, Role::Cycle) | (Role::Cycle, Role::Bottom(_)) | (Role::Top(_), Role::Cycle) => u.set(t, s, v),
                (Role::Top(sb), Role::Top(tb)) => {
                    u.set(t, s, v.clone());
                    u.set(tb, sb, v);
                }
                _ => {}
            }
        }
    }

    // unitriangular in the shuffled order, grading-preserving
    let mut nil = ExactMatrix::zeros(ring, n, n);
    for (x, &i) in order.iter().enumerate() {
        for &j in &order[x + 1..] {
            if gradings[i] == gradings[j] && rng.gen_bool(0.5) {
                nil.set(i, j, ring.from_i64(rng.gen_range(-2i64..=2)));
            }
        }
    }
    let id = ExactMatrix::identity(ring, n);
    let t = id.add(&nil);
    let mut t_inv = id.clone();
    let mut term = id;
    for _ in 0..n {
        term = term.mul(&nil.neg());
        t_inv = t_inv.add(&term);
    }
    let conj = |m: &ExactMatrix| t.mul(m).mul(&t_inv);

    let orbits = (0..n).map(|i| OrbitRecord::new(format!("a{}", i), Stab::Irr, gradings[i])).collect();
    let mut d = DonaldsonDatum::new(ring, orbits);
    d.set_operator(Operator::Boundary, conj(&bd)).expect("square");
    d.set_operator(Operator::UFloer, conj(&u)).expect("square");
    Ok(d)
}
