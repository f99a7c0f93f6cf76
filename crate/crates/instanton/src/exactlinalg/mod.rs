//! Exact linear algebra over Z, Q and F_p.

mod matrix;
mod ring;
mod snf;
mod sparse;

pub use matrix::ExactMatrix;
pub use ring::{format_elem, is_prime, Elem, Ring};
pub use snf::{smith_normal_form, Snf};
pub use sparse::{SparseVec, FilteredReducer};

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
    #[error("coefficient {0} does not lie in the ring")]
    NotInRing(String),
    #[error("shape error: {0}")]
    Shape(String),
}

/// Rank of a matrix (over Z this is the rank over Q).
pub fn rank(m: &ExactMatrix) -> usize {
    let field = match m.ring() {
        Ring::Integers => Ring::Rationals,
        r => r,
    };
    let (_, pivots) = rref(&m.change_ring(field));
    pivots.len()
}

/// Reduced row echelon form over a field, with pivot columns.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let ring = m.ring();
    assert!(ring.is_field(), "rref needs a field");
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(r, p);
        let inv = ring.inv(a.get(r, c)).unwrap();
        a.scale_row(r, &inv);
        for i in 0..a.rows() {
            if i != r && !a.get(i, c).is_zero() {
                let f = ring.neg(a.get(i, c));
                a.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Columns spanning ker(m). Over Z the columns form a basis of the
/// (saturated) kernel lattice.
pub fn kernel_basis(m: &ExactMatrix) -> ExactMatrix {
    let ring = m.ring();
    let n = m.cols();
    if ring.is_field() {
        let (a, pivots) = rref(m);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut k = ExactMatrix::zeros(ring, n, free.len());
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, ring.one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, t, ring.neg(a.get(row, f)));
            }
        }
        k
    } else {
        let s = smith_normal_form(m);
        let idx: Vec<usize> = (s.rank..n).collect();
        let rows: Vec<usize> = (0..n).collect();
        s.v.submatrix(&rows, &idx)
    }
}

/// coker(m) = R^free_rank ⊕ ⨁ R/(t_i), torsion as invariant factors > 1.
pub fn cokernel_presentation(m: &ExactMatrix) -> (usize, Vec<Elem>) {
    let s = smith_normal_form(m);
    let ring = m.ring();
    let torsion = s.diagonal().into_iter().filter(|d| !ring.is_unit(d)).collect();
    (m.rows() - s.rank, torsion)
}

/// Some solution x of m x = b, if one exists in the ring.
pub fn solve(m: &ExactMatrix, b: &[Elem]) -> Option<Vec<Elem>> {
    let s = smith_normal_form(m);
    solve_with(&s, b)
}

fn solve_with(s: &Snf, b: &[Elem]) -> Option<Vec<Elem>> {
    let ring = s.d.ring();
    let ub = s.u.mul_vec(b);
    let mut y = vec![Elem::zero(); s.d.cols()];
    for (i, x) in ub.iter().enumerate() {
        if i < s.rank {
            y[i] = ring.div_exact(x, s.d.get(i, i))?;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Determinant by fraction-free elimination (square matrices).
pub fn determinant(m: &ExactMatrix) -> Elem {
    assert_eq!(m.rows(), m.cols());
    let ring = m.ring();
    let field = if ring.is_field() { ring } else { Ring::Rationals };
    let mut a = m.change_ring(field);
    let n = a.rows();
    let mut det = Elem::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else { return Elem::zero() };
        if p != c {
            a.swap_rows(p, c);
            det = field.neg(&det);
        }
        let piv = a.get(c, c).clone();
        det = field.mul(&det, &piv);
        let inv = field.inv(&piv).unwrap();
        for i in c + 1..n {
            if !a.get(i, c).is_zero() {
                let f = field.neg(&field.mul(a.get(i, c), &inv));
                a.add_row_multiple(i, c, &f);
            }
        }
    }
    ring.normalize(det)
}

/// A subquotient L / K of R^n, where L has a basis (columns of `numer`) and
/// K ⊆ L is spanned by the columns of `denom`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ring: Ring,
    numer: ExactMatrix,
    numer_snf: Snf,
    rel_snf: Snf,
    /// indices (in the rel_snf basis) of surviving generators
    gens: Vec<usize>,
    /// order of each surviving generator (None = free)
    orders: Vec<Option<Elem>>,
}

impl Subquotient {
    /// Panics if a column of `denom` is not in the span of `numer`.
    pub fn new(numer: ExactMatrix, denom: &ExactMatrix) -> Subquotient {
        let ring = numer.ring();
        let numer_snf = smith_normal_form(&numer);
        assert_eq!(numer_snf.rank, numer.cols(), "numerator columns must be independent");
        let l = numer.cols();
        let mut rel = ExactMatrix::zeros(ring, l, denom.cols());
        for j in 0..denom.cols() {
            let c = solve_with(&numer_snf, &denom.column(j))
                .expect("denominator not contained in numerator");
            for (i, x) in c.into_iter().enumerate() {
                rel.set(i, j, x);
            }
        }
        let rel_snf = smith_normal_form(&rel);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for i in 0..l {
            if i < rel_snf.rank {
                let d = rel_snf.d.get(i, i);
                if !ring.is_unit(d) {
                    gens.push(i);
                    orders.push(Some(d.clone()));
                }
            } else {
                gens.push(i);
                orders.push(None);
            }
        }
        Subquotient { ring, numer, numer_snf, rel_snf, gens, orders }
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| o.is_none()).count()
    }

    pub fn torsion(&self) -> Vec<Elem> {
        self.orders.iter().flatten().cloned().collect()
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn orders(&self) -> &[Option<Elem>] {
        &self.orders
    }

    /// Ambient vectors representing the generators.
    pub fn representatives(&self) -> Vec<Vec<Elem>> {
        self.gens
            .iter()
            .map(|&i| self.numer.mul_vec(&self.rel_snf.u_inv.column(i)))
            .collect()
    }

    /// Coordinates of v (which must lie in L) along the generators; torsion
    /// coordinates are reduced to `0..order` over Z. None if v ∉ L.
    pub fn coords(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let c = solve_with(&self.numer_snf, v)?;
        let y = self.rel_snf.u.mul_vec(&c);
        Some(
            self.gens
                .iter()
                .zip(&self.orders)
                .map(|(&i, o)| match (o, self.ring) {
                    (Some(ord), Ring::Integers) => {
                        use num_integer::Integer;
                        Elem::from_integer(y[i].numer().mod_floor(ord.numer()))
                    }
                    _ => y[i].clone(),
                })
                .collect(),
        )
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
}
