//! Augmented dg-algebras with explicit bases, and dg-modules over them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::exactlinalg::{Elem, ExactMatrix, Ring};
use crate::gradedcomplex::{ComplexError, GradedComplex, Grading};


/// A basis element: (degree, index within that degree). For cyclic
/// complexes the degree is the normalized residue.
pub type Gen = (i64, usize);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DgError {
    #[error("exterior generator in degree {0} must be odd unless 2 = 0")]
    InvalidParity(i64),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("structure identities fail: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Violations(Vec<Violation>),
}

/// A failed structure identity, with the basis elements involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Leibniz(String),
    Associativity(String),
    Augmentation(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Leibniz(s) => write!(f, "Leibniz rule fails on {}", s),
            Violation::Associativity(s) => write!(f, "associativity fails on {}", s),
            Violation::Augmentation(s) => write!(f, "augmentation is not a dg-algebra map: {}", s),
        }
    }
}

fn sign_of(ring: Ring, k: i64) -> Elem {
    ring.sign(k.rem_euclid(2) == 1)
}

fn unit_vector(ring: Ring, n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![ring.zero(); n];
    v[i] = ring.one();
    v
}

fn axpy(ring: Ring, y: &mut [Elem], a: &Elem, x: &[Elem]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = ring.mul_add(yi, a, xi);
        }
    }
}

/// A unital augmented dg-algebra, non-negatively graded and bounded.
///
/// The basis is adapted to the augmentation: ε is 1 on the unit and 0 on
/// every other basis element, so the non-unit basis elements span the
/// augmentation ideal. Products involving the unit are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct DgAlgebra {
    complex: GradedComplex,
    unit: usize,
    products: HashMap<(Gen, Gen), Vec<Elem>>,
}

impl DgAlgebra {
    /// `products` lists a·b for non-unit basis elements; missing pairs are
    /// zero. Checks Leibniz, associativity and the augmentation.
    pub fn new(
        complex: GradedComplex,
        unit: usize,
        products: HashMap<(Gen, Gen), Vec<Elem>>,
    ) -> Result<Self, DgError> {
        let Grading::Integer { lo, .. } = complex.grading() else {
            return Err(DgError::Shape("algebras are integer graded".into()));
        };
        if lo < 0 || complex.rank(0) <= unit {
            return Err(DgError::Shape("algebra needs a degree-0 unit and no negative degrees".into()));
        }
        let ring = complex.ring();
        let mut clean = HashMap::new();
        for ((a, b), v) in products {
            if v.len() != complex.rank(a.0 + b.0) {
                return Err(DgError::Shape(format!("product {:?}·{:?} has {} coordinates", a, b, v.len())));
            }
            if v.iter().any(|x| !x.is_zero()) {
                clean.insert((a, b), v.into_iter().map(|x| ring.normalize(x)).collect());
            }
        }
        let alg = DgAlgebra { complex, unit, products: clean };
        let bad = alg.validate();
        if !bad.is_empty() {
            return Err(DgError::Violations(bad));
        }
        Ok(alg)
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    pub fn top_degree(&self) -> i64 {
        self.complex.window().map_or(0, |w| w.1)
    }

    pub fn unit(&self) -> Gen {
        (0, self.unit)
    }

    pub fn rank(&self, k: i64) -> usize {
        self.complex.rank(k)
    }

    /// All basis elements, by degree.
    pub fn basis(&self) -> Vec<Gen> {
        self.complex.degrees().into_iter().flat_map(|k| (0..self.rank(k)).map(move |i| (k, i))).collect()
    }

    /// Basis of the augmentation ideal (every basis element but the unit).
    pub fn ideal_basis(&self) -> Vec<Gen> {
        self.basis().into_iter().filter(|&g| g != self.unit()).collect()
    }

    pub fn augmentation(&self, g: Gen) -> Elem {
        if g == self.unit() {
            self.ring().one()
        } else {
            self.ring().zero()
        }
    }

    /// d of a basis element, in degree |g| - 1.
    pub fn d(&self, g: Gen) -> Vec<Elem> {
        self.complex.diff(g.0).column(g.1)
    }

    /// Product of two basis elements, in degree |a| + |b|.
    pub fn mul(&self, a: Gen, b: Gen) -> Vec<Elem> {
        let n = self.rank(a.0 + b.0);
        if a == self.unit() {
            return unit_vector(self.ring(), n, b.1);
        }
        if b == self.unit() {
            return unit_vector(self.ring(), n, a.1);
        }
        self.products.get(&(a, b)).cloned().unwrap_or_else(|| vec![self.ring().zero(); n])
    }

    /// Bilinear extension of [`DgAlgebra::mul`] to vectors in degrees i, j.
    pub fn mul_vec(&self, i: i64, x: &[Elem], j: i64, y: &[Elem]) -> Vec<Elem> {
        let ring = self.ring();
        let mut out = vec![ring.zero(); self.rank(i + j)];
        for (p, xp) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (q, yq) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(ring, &mut out, &ring.mul(xp, yq), &self.mul((i, p), (j, q)));
            }
        }
        out
    }

    /// True when ab = (-1)^{|a||b|} ba on all basis pairs.
    pub fn is_graded_commutative(&self) -> bool {
        let ring = self.ring();
        let basis = self.basis();
        basis.iter().all(|&a| {
            basis.iter().all(|&b| {
                let s = sign_of(ring, a.0 * b.0);
                let ba: Vec<Elem> = self.mul(b, a).iter().map(|x| ring.mul(&s, x)).collect();
                self.mul(a, b) == ba
            })
        })
    }

    /// Violated identities (empty for a valid algebra).
    pub fn validate(&self) -> Vec<Violation> {
        let ring = self.ring();
        let basis = self.basis();
        let mut out = Vec::new();
        // ε∘d = 0 and ε(ab) = ε(a)ε(b)
        for i in 0..self.rank(1) {
            if !self.d((1, i))[self.unit].is_zero() {
                out.push(Violation::Augmentation(format!("ε(d{:?}) != 0", (1, i))));
            }
        }
        for &a in &basis {
            for &b in &basis {
                if a.0 + b.0 == 0 {
                    let p = self.mul(a, b);
                    if p[self.unit] != ring.mul(&self.augmentation(a), &self.augmentation(b)) {
                        out.push(Violation::Augmentation(format!("ε({:?}·{:?})", a, b)));
                    }
                }
            }
        }
        for &a in &basis {
            for &b in &basis {
                let (i, j) = (a.0, b.0);
                let lhs = self.complex.diff(i + j).mul_vec(&self.mul(a, b));
                let mut rhs = self.mul_vec(i - 1, &self.d(a), j, &unit_vector(ring, self.rank(j), b.1));
                let adb = self.mul_vec(i, &unit_vector(ring, self.rank(i), a.1), j - 1, &self.d(b));
                axpy(ring, &mut rhs, &sign_of(ring, i), &adb);
                if lhs != rhs {
                    out.push(Violation::Leibniz(format!("{:?}, {:?}", a, b)));
                }
                for &c in &basis {
                    let l = self.mul_vec(i + j, &self.mul(a, b), c.0, &unit_vector(ring, self.rank(c.0), c.1));
                    let r = self.mul_vec(i, &unit_vector(ring, self.rank(i), a.1), j + c.0, &self.mul(b, c));
                    if l != r {
                        out.push(Violation::Associativity(format!("{:?}, {:?}, {:?}", a, b, c)));
                    }
                }
            }
        }
        out
    }
}

/// Λ(u_n): basis {1, u} with |u| = n, u² = 0 and d = 0.
pub fn exterior_algebra(n: i64, ring: Ring) -> Result<DgAlgebra, DgError> {
    if n <= 0 {
        return Err(DgError::Shape(format!("generator degree {} must be positive", n)));
    }
    if n % 2 == 0 && ring.characteristic() != 2 {
        return Err(DgError::InvalidParity(n));
    }
    let grading = Grading::Integer { lo: 0, hi: n };
    let ranks = grading.degrees().iter().map(|&k| usize::from(k == 0 || k == n)).collect();
    let complex = GradedComplex::from_fn(ring, grading, ranks, |k| {
        let r = |j: i64| usize::from(j == 0 || j == n);
        ExactMatrix::zeros(ring, r(k - 1), r(k))
    })?;
    DgAlgebra::new(complex, 0, HashMap::new())
}

/// The four-generator algebra with a_i in degree i (a_0 the unit),
/// d a_2 = 2 a_1, a_1² = 0, a_1 a_2 = a_3, a_2 a_1 = -a_3 and every other
/// product of augmentation-ideal elements zero.
pub fn model_algebra_a(ring: Ring) -> Result<DgAlgebra, DgError> {
    let grading = Grading::Integer { lo: 0, hi: 3 };
    let complex = GradedComplex::from_fn(ring, grading, vec![1, 1, 1, 1], |k| {
        let mut m = ExactMatrix::zeros(ring, usize::from(k >= 1), 1);
        if k == 2 {
            m.set(0, 0, ring.from_i64(2));
        }
        m
    })?;
    let mut products = HashMap::new();
    products.insert(((1, 0), (2, 0)), vec![ring.one()]);
    products.insert(((2, 0), (1, 0)), vec![ring.from_i64(-1)]);
    DgAlgebra::new(complex, 0, products)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A dg-module over a [`DgAlgebra`], acting from one side.
///
/// Right modules satisfy d(ma) = (dm)a + (-1)^{|m|} m(da); left modules
/// d(am) = (da)m + (-1)^{|a|} a(dm). The unit acts as the identity.
#[derive(Clone, Debug)]
pub struct DgModule {
    complex: GradedComplex,
    algebra: Arc<DgAlgebra>,
    side: Side,
    actions: HashMap<(Gen, Gen), Vec<Elem>>,
}

impl DgModule {
    /// `actions[(m, a)]` is the action of the non-unit algebra basis element
    /// a on the module basis element m (missing pairs act by zero).
    pub fn new(
        complex: GradedComplex,
        algebra: Arc<DgAlgebra>,
        side: Side,
        actions: HashMap<(Gen, Gen), Vec<Elem>>,
    ) -> Result<Self, DgError> {
        let module = Self::new_unchecked(complex, algebra, side, actions)?;
        let bad = module.validate();
        if !bad.is_empty() {
            return Err(DgError::Violations(bad));
        }
        Ok(module)
    }

    /// Shape-checks only. For truncated complexes whose identities hold
    /// only away from the window edges.
    pub fn new_unchecked(
        complex: GradedComplex,
        algebra: Arc<DgAlgebra>,
        side: Side,
        actions: HashMap<(Gen, Gen), Vec<Elem>>,
    ) -> Result<Self, DgError> {
        if complex.ring() != algebra.ring() {
            return Err(ComplexError::RingMismatch(complex.ring(), algebra.ring()).into());
        }
        let ring = complex.ring();
        let g = complex.grading();
        let mut clean = HashMap::new();
        for (((md, mi), a), v) in actions {
            let md = g.normalize(md);
            if v.len() != complex.rank(md + a.0) {
                return Err(DgError::Shape(format!("action on {:?} by {:?} has {} coordinates", (md, mi), a, v.len())));
            }
            if v.iter().any(|x| !x.is_zero()) {
                clean.insert(((md, mi), a), v.into_iter().map(|x| ring.normalize(x)).collect());
            }
        }
        Ok(DgModule { complex, algebra, side, actions: clean })
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn algebra(&self) -> &Arc<DgAlgebra> {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    pub fn rank(&self, k: i64) -> usize {
        self.complex.rank(k)
    }

    fn norm(&self, k: i64) -> i64 {
        self.complex.grading().normalize(k)
    }

    /// Module basis elements, by (normalized) degree.
    pub fn basis(&self) -> Vec<Gen> {
        self.complex.degrees().into_iter().flat_map(|k| (0..self.rank(k)).map(move |i| (k, i))).collect()
    }

    /// Action of algebra basis element a on module basis element m, in
    /// degree |m| + |a|.
    pub fn act(&self, m: Gen, a: Gen) -> Vec<Elem> {
        let m = (self.norm(m.0), m.1);
        let n = self.rank(m.0 + a.0);
        if a == self.algebra.unit() {
            return unit_vector(self.ring(), n, m.1);
        }
        self.actions.get(&(m, a)).cloned().unwrap_or_else(|| vec![self.ring().zero(); n])
    }

    /// Bilinear extension of [`DgModule::act`]: module vector x in degree i,
    /// algebra vector y in degree j.
    pub fn act_vec(&self, i: i64, x: &[Elem], j: i64, y: &[Elem]) -> Vec<Elem> {
        let ring = self.ring();
        let mut out = vec![ring.zero(); self.rank(i + j)];
        for (p, xp) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (q, yq) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(ring, &mut out, &ring.mul(xp, yq), &self.act((i, p), (j, q)));
            }
        }
        out
    }

    /// The same module acting from the other side via
    /// m·a = (-1)^{|m||a|} a·m. Needs a graded-commutative algebra.
    pub fn opposite(&self) -> Result<DgModule, DgError> {
        if !self.algebra.is_graded_commutative() {
            return Err(DgError::Shape("switching sides needs a graded-commutative algebra".into()));
        }
        let ring = self.ring();
        let actions = self
            .actions
            .iter()
            .map(|(&(m, a), v)| {
                let s = sign_of(ring, m.0 * a.0);
                ((m, a), v.iter().map(|x| ring.mul(&s, x)).collect())
            })
            .collect();
        let side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        Ok(DgModule { complex: self.complex.clone(), algebra: self.algebra.clone(), side, actions })
    }

    /// Violated identities (empty for a valid module).
    pub fn validate(&self) -> Vec<Violation> {
        let ring = self.ring();
        let alg = &self.algebra;
        let abasis = alg.basis();
        let mut out = Vec::new();
        let e = |k: i64, i: usize| unit_vector(ring, self.rank(k), i);
        let ea = |k: i64, i: usize| unit_vector(ring, alg.rank(k), i);
        for m in self.basis() {
            let (i, dm) = (m.0, self.complex.diff(m.0).column(m.1));
            for &a in &abasis {
                let j = a.0;
                let lhs = self.complex.diff(i + j).mul_vec(&self.act(m, a));
                let (mut rhs, sign, other) = match self.side {
                    Side::Right => (self.act_vec(i - 1, &dm, j, &ea(j, a.1)), sign_of(ring, i), self.act_vec(i, &e(i, m.1), j - 1, &alg.d(a))),
                    Side::Left => (self.act_vec(i, &e(i, m.1), j - 1, &alg.d(a)), sign_of(ring, j), self.act_vec(i - 1, &dm, j, &ea(j, a.1))),
                };
                axpy(ring, &mut rhs, &sign, &other);
                if lhs != rhs {
                    out.push(Violation::Leibniz(format!("module {:?}, algebra {:?}", m, a)));
                }
                for &b in &abasis {
                    // right: (ma)b = m(ab); left: a(bm) = (ab)m
                    let (first, second) = match self.side {
                        Side::Right => (a, b),
                        Side::Left => (b, a),
                    };
                    let l = self.act_vec(i + first.0, &self.act(m, first), second.0, &ea(second.0, second.1));
                    let r = self.act_vec(i, &e(i, m.1), a.0 + b.0, &alg.mul(a, b));
                    if l != r {
                        out.push(Violation::Associativity(format!("module {:?}, algebra {:?}, {:?}", m, a, b)));
                    }
                }
            }
        }
        out
    }

    /// Matrix of the action of algebra basis element a, from degree k to
    /// degree k + |a|.
    pub fn action_matrix(&self, a: Gen, k: i64) -> ExactMatrix {
        let cols: Vec<Vec<Elem>> = (0..self.rank(k)).map(|i| self.act((k, i), a)).collect();
        ExactMatrix::from_columns(self.ring(), self.rank(k + a.0), &cols)
    }
}

/// C with A acting through the augmentation: m·a = ε(a)m.
pub fn trivial_module(c: &GradedComplex, algebra: Arc<DgAlgebra>, side: Side) -> Result<DgModule, DgError> {
    DgModule::new(c.clone(), algebra, side, HashMap::new())
}

/// A acting on itself by multiplication.
pub fn regular_module(algebra: Arc<DgAlgebra>, side: Side) -> Result<DgModule, DgError> {
    let mut actions = HashMap::new();
    for m in algebra.basis() {
        for a in algebra.ideal_basis() {
            let v = match side {
                Side::Right => algebra.mul(m, a),
                Side::Left => algebra.mul(a, m),
            };
            actions.insert((m, a), v);
        }
    }
    DgModule::new(algebra.complex().clone(), algebra, side, actions)
}
