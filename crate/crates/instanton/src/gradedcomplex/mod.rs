//! Chain complexes of free modules, graded over Z (finite window) or Z/2N.

mod keyed;
mod maps;

pub use keyed::{ComplexBuilder, KeyedComplex};
pub use maps::{les_defects, ChainMap};

use num_traits::Zero;
use thiserror::Error;

use crate::exactlinalg::{kernel_basis, Elem, ExactMatrix, Ring, Subquotient};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("homology in degree {degree} is outside the valid range [{lo}, {hi}]")]
    DegreeOutOfWindow { degree: i64, lo: i64, hi: i64 },
    #[error("complexes are over different rings ({0} and {1})")]
    RingMismatch(Ring, Ring),
    #[error("incompatible gradings: {0}")]
    GradingMismatch(String),
    #[error("d^2 != 0 at degree {0}")]
    NotSquareZero(i64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("not a chain map at source degree {0}")]
    NotChainMap(i64),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("operation needs complexes whose homology is valid in every window degree")]
    Truncated,
}

/// How degrees are indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Ranks are zero outside `[lo, hi]`.
    Integer { lo: i64, hi: i64 },
    /// Degrees taken mod `modulus` (always even).
    Cyclic { modulus: i64 },
}

impl Grading {
    pub fn is_cyclic(&self) -> bool {
        matches!(self, Grading::Cyclic { .. })
    }

    /// Canonical representative of a degree (reduced mod the modulus).
    pub fn normalize(&self, k: i64) -> i64 {
        match *self {
            Grading::Integer { .. } => k,
            Grading::Cyclic { modulus } => k.rem_euclid(modulus),
        }
    }

    fn slot(&self, k: i64) -> Option<usize> {
        match *self {
            Grading::Integer { lo, hi } => (lo..=hi).contains(&k).then(|| (k - lo) as usize),
            Grading::Cyclic { modulus } => Some(k.rem_euclid(modulus) as usize),
        }
    }

    /// Representative degrees, one per slot, in increasing order.
    pub fn degrees(&self) -> Vec<i64> {
        match *self {
            Grading::Integer { lo, hi } => (lo..=hi).collect(),
            Grading::Cyclic { modulus } => (0..modulus).collect(),
        }
    }

    fn len(&self) -> usize {
        match *self {
            Grading::Integer { lo, hi } => (hi - lo + 1).max(0) as usize,
            Grading::Cyclic { modulus } => modulus as usize,
        }
    }
}

/// A chain complex of free modules with explicit ordered bases.
///
/// `diff(k)` is the matrix of d: C_k -> C_{k-1}. For integer gradings the
/// complex also records the range of degrees in which its homology agrees
/// with that of the untruncated object it stands for.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedComplex {
    ring: Ring,
    grading: Grading,
    ranks: Vec<usize>,
    diffs: Vec<ExactMatrix>,
    /// None: genuinely zero outside the window, homology valid everywhere.
    valid: Option<(i64, i64)>,
}

impl GradedComplex {
    /// `ranks` and `diffs` are listed per slot (degrees `lo..=hi`, or
    /// `0..modulus`). Checks shapes, ring membership and d^2 = 0.
    pub fn new(
        ring: Ring,
        grading: Grading,
        ranks: Vec<usize>,
        diffs: Vec<ExactMatrix>,
    ) -> Result<Self, ComplexError> {
        if let Grading::Cyclic { modulus } = grading {
            if modulus < 2 || modulus % 2 != 0 {
                return Err(ComplexError::GradingMismatch(format!("modulus {} is not even", modulus)));
            }
        }
        if let Grading::Integer { lo, hi } = grading {
            if hi < lo {
                return Err(ComplexError::Shape(format!("empty window [{}, {}]", lo, hi)));
            }
        }
        let n = grading.len();
        if ranks.len() != n || diffs.len() != n {
            return Err(ComplexError::Shape(format!(
                "expected {} slots, got {} ranks and {} differentials",
                n,
                ranks.len(),
                diffs.len()
            )));
        }
        let c = GradedComplex { ring, grading, ranks, diffs, valid: None };
        for k in grading.degrees() {
            let d = &c.diffs[c.grading.slot(k).unwrap()];
            if d.ring() != ring {
                return Err(ComplexError::RingMismatch(ring, d.ring()));
            }
            if d.rows() != c.rank(k - 1) || d.cols() != c.rank(k) {
                return Err(ComplexError::Shape(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    k,
                    d.rows(),
                    d.cols(),
                    c.rank(k - 1),
                    c.rank(k)
                )));
            }
        }
        for k in grading.degrees() {
            if !c.diff(k - 1).mul(&c.diff(k)).is_zero() {
                return Err(ComplexError::NotSquareZero(k));
            }
        }
        Ok(c)
    }

    /// Builds from a closure giving d_k for each representable degree.
    pub fn from_fn(
        ring: Ring,
        grading: Grading,
        ranks: Vec<usize>,
        mut diff: impl FnMut(i64) -> ExactMatrix,
    ) -> Result<Self, ComplexError> {
        let diffs = grading.degrees().into_iter().map(&mut diff).collect();
        Self::new(ring, grading, ranks, diffs)
    }

    /// A single copy of R in degree k.
    pub fn unit(ring: Ring, k: i64) -> Self {
        Self::new(
            ring,
            Grading::Integer { lo: k, hi: k },
            vec![1],
            vec![ExactMatrix::zeros(ring, 0, 1)],
        )
        .unwrap()
    }

    /// Marks the homology as trustworthy only in `[lo, hi]` (intersected
    /// with the current range). Used by truncating constructions.
    pub fn with_valid_range(mut self, lo: i64, hi: i64) -> Self {
        if self.grading.is_cyclic() {
            return self;
        }
        self.valid = Some(match self.valid {
            None => (lo, hi),
            Some((a, b)) => (a.max(lo), b.min(hi)),
        });
        self
    }

    /// Replaces the valid range outright, for callers that know a sharper
    /// bound than the one inherited from construction.
    pub(crate) fn replace_valid_range(mut self, lo: i64, hi: i64) -> Self {
        if !self.grading.is_cyclic() {
            self.valid = Some((lo, hi));
        }
        self
    }

    /// Degrees with trustworthy homology; None means all degrees.
    pub fn valid_range(&self) -> Option<(i64, i64)> {
        self.valid
    }

    pub fn is_fully_valid(&self) -> bool {
        self.valid.is_none()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        match self.grading {
            Grading::Integer { lo, hi } => Some((lo, hi)),
            Grading::Cyclic { .. } => None,
        }
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.grading.degrees()
    }

    pub fn rank(&self, k: i64) -> usize {
        self.grading.slot(k).map_or(0, |s| self.ranks[s])
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// d_k : C_k -> C_{k-1} (a zero matrix of the right shape outside the window).
    pub fn diff(&self, k: i64) -> ExactMatrix {
        match self.grading.slot(k) {
            Some(s) => self.diffs[s].clone(),
            None => ExactMatrix::zeros(self.ring, self.rank(k - 1), self.rank(k)),
        }
    }

    fn check_valid(&self, k: i64) -> Result<(), ComplexError> {
        let Some((lo, hi)) = self.valid else { return Ok(()) };
        if k < lo || k > hi {
            return Err(ComplexError::DegreeOutOfWindow { degree: k, lo, hi });
        }
        Ok(())
    }

    /// H_k = ker d_k / im d_{k+1}.
    pub fn homology(&self, k: i64) -> Result<HomologyGroup, ComplexError> {
        self.check_valid(k)?;
        let ker = kernel_basis(&self.diff(k));
        let im = self.diff(k + 1);
        Ok(HomologyGroup { degree: k, sq: Subquotient::new(ker, &im) })
    }

    /// Σ (-1)^k rank C_k over the window (integer gradings only).
    pub fn euler_characteristic(&self) -> Option<i64> {
        let Grading::Integer { .. } = self.grading else { return None };
        Some(
            self.degrees()
                .into_iter()
                .map(|k| if k.rem_euclid(2) == 0 { self.rank(k) as i64 } else { -(self.rank(k) as i64) })
                .sum(),
        )
    }

    /// Extends an integer window by `n` zero degrees on each side.
    pub fn padded(&self, n: i64) -> Self {
        let Grading::Integer { lo, hi } = self.grading else { return self.clone() };
        let grading = Grading::Integer { lo: lo - n, hi: hi + n };
        let ranks = grading.degrees().iter().map(|&k| self.rank(k)).collect();
        let diffs = grading.degrees().iter().map(|&k| self.diff(k)).collect();
        GradedComplex { ring: self.ring, grading, ranks, diffs, valid: self.valid }
    }

    /// C[n]_k = C_{k-n}, with differential (-1)^n d.
    pub fn shift(&self, n: i64) -> Self {
        let sign = self.ring.sign(n.rem_euclid(2) == 1);
        let grading = match self.grading {
            Grading::Integer { lo, hi } => Grading::Integer { lo: lo + n, hi: hi + n },
            g => g,
        };
        let ranks = grading.degrees().iter().map(|&k| self.rank(k - n)).collect();
        let diffs = grading.degrees().iter().map(|&k| self.diff(k - n).scale(&sign)).collect();
        let valid = self.valid.map(|(a, b)| (a + n, b + n));
        GradedComplex { ring: self.ring, grading, ranks, diffs, valid }
    }

    /// The sign-fixed dual: dual_k = Hom(C_{-k}, R) with δf = f∘d, so δ_k is
    /// the transpose of d_{1-k}. It is isomorphic to `hom_complex(C, R)` via
    /// f ↦ (-1)^{k(k-1)/2} f in degree k.
    pub fn dual(&self) -> Self {
        let grading = match self.grading {
            Grading::Integer { lo, hi } => Grading::Integer { lo: -hi, hi: -lo },
            g => g,
        };
        let ranks = grading.degrees().iter().map(|&k| self.rank(-k)).collect();
        let diffs = grading.degrees().iter().map(|&k| self.diff(1 - k).transpose()).collect();
        let valid = self.valid.map(|(a, b)| (-b, -a));
        GradedComplex { ring: self.ring, grading, ranks, diffs, valid }
    }

    /// Integer-graded copy of a cyclic complex on `[lo, hi]`: C̃_k = C_{k mod 2N}.
    /// d_lo is cut off, so homology is valid on `[lo+1, hi-1]`.
    pub fn unroll(&self, lo: i64, hi: i64) -> Result<Self, ComplexError> {
        let Grading::Cyclic { .. } = self.grading else {
            return Err(ComplexError::GradingMismatch("unroll needs a cyclic complex".into()));
        };
        if hi < lo {
            return Err(ComplexError::Shape(format!("empty window [{}, {}]", lo, hi)));
        }
        let grading = Grading::Integer { lo, hi };
        let ranks = grading.degrees().iter().map(|&k| self.rank(k)).collect();
        let diffs = grading
            .degrees()
            .iter()
            .map(|&k| if k == lo { ExactMatrix::zeros(self.ring, 0, self.rank(k)) } else { self.diff(k) })
            .collect();
        Ok(GradedComplex { ring: self.ring, grading, ranks, diffs, valid: Some((lo + 1, hi - 1)) })
    }

    /// Tensor product with d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy. Basis in degree n
    /// is listed pair by pair (see [`tensor_layout`]), x-major inside a pair.
    pub fn tensor(&self, other: &GradedComplex) -> Result<Self, ComplexError> {
        let ring = self.same_ring(other)?;
        if !self.is_fully_valid() || !other.is_fully_valid() {
            return Err(ComplexError::Truncated);
        }
        let grading = combined_grading(self.grading, other.grading, |a, b| a + b)?;
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for n in grading.degrees() {
            let layout = tensor_layout(self, other, n);
            let target = tensor_layout(self, other, n - 1);
            let rank_n: usize = layout.iter().map(|p| p.len).sum();
            let rank_t: usize = target.iter().map(|p| p.len).sum();
            let mut d = ExactMatrix::zeros(ring, rank_t, rank_n);
            for p in &layout {
                let (a, b) = (p.left, p.right);
                let rb = other.rank(b);
                let sign = ring.sign(a.rem_euclid(2) == 1);
                let dc = self.diff(a);
                let dd = other.diff(b);
                let ta = find_block(&target, self.grading.normalize(a - 1), b);
                let tb = find_block(&target, a, other.grading.normalize(b - 1));
                for i in 0..self.rank(a) {
                    for j in 0..rb {
                        let col = p.offset + i * rb + j;
                        if let Some(t) = ta {
                            for s in 0..dc.rows() {
                                let v = dc.get(s, i);
                                if !v.is_zero() {
                                    let row = t.offset + s * rb + j;
                                    let cur = d.get(row, col).clone();
                                    d.set(row, col, ring.add(&cur, v));
                                }
                            }
                        }
                        if let Some(t) = tb {
                            let rb1 = other.rank(b - 1);
                            for s in 0..dd.rows() {
                                let v = dd.get(s, j);
                                if !v.is_zero() {
                                    let row = t.offset + i * rb1 + s;
                                    let cur = d.get(row, col).clone();
                                    d.set(row, col, ring.mul_add(&cur, &sign, v));
                                }
                            }
                        }
                    }
                }
            }
            ranks.push(rank_n);
            diffs.push(d);
        }
        GradedComplex::new(ring, grading, ranks, diffs)
    }

    /// Hom(C, D) graded so that |x| + |η| = |η(x)|, with
    /// dη = d_D η - (-1)^{|η|} η d_C. Basis in degree n: matrix units
    /// x_i ↦ y_j, pair by pair (see [`hom_layout`]), source-major.
    pub fn hom_complex(&self, other: &GradedComplex) -> Result<Self, ComplexError> {
        let ring = self.same_ring(other)?;
        if !self.is_fully_valid() || !other.is_fully_valid() {
            return Err(ComplexError::Truncated);
        }
        let grading = combined_grading(self.grading, other.grading, |a, b| b - a)
            .map(|g| match (g, self.grading, other.grading) {
                (Grading::Integer { .. }, Grading::Integer { lo: l1, hi: h1 }, Grading::Integer { lo: l2, hi: h2 }) => {
                    Grading::Integer { lo: l2 - h1, hi: h2 - l1 }
                }
                (g, ..) => g,
            })?;
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for n in grading.degrees() {
            let layout = hom_layout(self, other, n);
            let target = hom_layout(self, other, n - 1);
            let rank_n: usize = layout.iter().map(|p| p.len).sum();
            let rank_t: usize = target.iter().map(|p| p.len).sum();
            let mut d = ExactMatrix::zeros(ring, rank_t, rank_n);
            let sign = ring.neg(&ring.sign(n.rem_euclid(2) == 1));
            for p in &layout {
                let (a, b) = (p.left, p.right);
                let rb = other.rank(b);
                let dd = other.diff(b);
                // η d_C reads off C_{a+1} -> C_a
                let dc = self.diff(a + 1);
                let tdd = find_block(&target, a, other.grading.normalize(b - 1));
                let tdc = find_block(&target, self.grading.normalize(a + 1), b);
                for i in 0..self.rank(a) {
                    for j in 0..rb {
                        let col = p.offset + i * rb + j;
                        if let Some(t) = tdd {
                            let rb1 = other.rank(b - 1);
                            for s in 0..dd.rows() {
                                let v = dd.get(s, j);
                                if !v.is_zero() {
                                    let row = t.offset + i * rb1 + s;
                                    let cur = d.get(row, col).clone();
                                    d.set(row, col, ring.add(&cur, v));
                                }
                            }
                        }
                        if let Some(t) = tdc {
                            for s in 0..dc.cols() {
                                let v = dc.get(i, s);
                                if !v.is_zero() {
                                    let row = t.offset + s * rb + j;
                                    let cur = d.get(row, col).clone();
                                    d.set(row, col, ring.mul_add(&cur, &sign, v));
                                }
                            }
                        }
                    }
                }
            }
            ranks.push(rank_n);
            diffs.push(d);
        }
        GradedComplex::new(ring, grading, ranks, diffs)
    }

    /// Cone of a degree-0 chain map f: C -> D. Cone_k = C_{k-1} ⊕ D_k with
    /// differential [[-d_C, 0], [f, d_D]].
    pub fn cone(f: &ChainMap) -> Result<Self, ComplexError> {
        if f.degree() != 0 {
            return Err(ComplexError::GradingMismatch("cone needs a degree-0 map".into()));
        }
        let (c, d) = (f.source(), f.target());
        let ring = c.same_ring(d)?;
        let grading = match (c.grading, d.grading) {
            (Grading::Integer { lo: l1, hi: h1 }, Grading::Integer { lo: l2, hi: h2 }) => {
                Grading::Integer { lo: (l1 + 1).min(l2), hi: (h1 + 1).max(h2) }
            }
            (Grading::Cyclic { modulus: m1 }, Grading::Cyclic { modulus: m2 }) if m1 == m2 => c.grading,
            _ => return Err(ComplexError::GradingMismatch("cone of mixed gradings".into())),
        };
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for k in grading.degrees() {
            let (rc, rd) = (c.rank(k - 1), d.rank(k));
            let (rc1, rd1) = (c.rank(k - 2), d.rank(k - 1));
            let mut m = ExactMatrix::zeros(ring, rc1 + rd1, rc + rd);
            m.set_block(0, 0, &c.diff(k - 1).neg());
            m.set_block(rc1, 0, &f.matrix(k - 1));
            m.set_block(rc1, rc, &d.diff(k));
            ranks.push(rc + rd);
            diffs.push(m);
        }
        let cone = GradedComplex::new(ring, grading, ranks, diffs)?;
        let mut cone = cone;
        if let Some((lo, hi)) = c.valid {
            cone = cone.with_valid_range(lo + 1, hi + 1);
        }
        if let Some((lo, hi)) = d.valid {
            cone = cone.with_valid_range(lo, hi);
        }
        Ok(cone)
    }

    /// Same complex with coefficients pushed into another ring.
    pub fn change_ring(&self, ring: Ring) -> Result<Self, ComplexError> {
        let diffs = self.diffs.iter().map(|d| d.change_ring(ring)).collect();
        let c = GradedComplex::new(ring, self.grading, self.ranks.clone(), diffs)?;
        Ok(GradedComplex { valid: self.valid, ..c })
    }

    fn same_ring(&self, other: &GradedComplex) -> Result<Ring, ComplexError> {
        if self.ring != other.ring {
            return Err(ComplexError::RingMismatch(self.ring, other.ring));
        }
        Ok(self.ring)
    }
}

fn combined_grading(
    a: Grading,
    b: Grading,
    combine: impl Fn(i64, i64) -> i64,
) -> Result<Grading, ComplexError> {
    Ok(match (a, b) {
        (Grading::Integer { lo: l1, hi: h1 }, Grading::Integer { lo: l2, hi: h2 }) => {
            Grading::Integer { lo: combine(l1, l2), hi: combine(h1, h2) }
        }
        (Grading::Cyclic { modulus: m1 }, Grading::Cyclic { modulus: m2 }) => {
            if m1 != m2 {
                return Err(ComplexError::GradingMismatch(format!("moduli {} and {}", m1, m2)));
            }
            a
        }
        (Grading::Cyclic { .. }, _) => a,
        (_, Grading::Cyclic { .. }) => b,
    })
}

/// One block of a tensor or hom basis: the pair of factor degrees and the
/// position of its first basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairBlock {
    pub left: i64,
    pub right: i64,
    pub offset: usize,
    pub len: usize,
}

/// Blocks (a, b) with a + b = n making up degree n of C ⊗ D.
pub fn tensor_layout(c: &GradedComplex, d: &GradedComplex, n: i64) -> Vec<PairBlock> {
    pair_layout(c, d, n, |a, b| a + b)
}

/// Blocks (a, b) with b - a = n making up degree n of Hom(C, D).
pub fn hom_layout(c: &GradedComplex, d: &GradedComplex, n: i64) -> Vec<PairBlock> {
    pair_layout(c, d, n, |a, b| b - a)
}

fn pair_layout(
    c: &GradedComplex,
    d: &GradedComplex,
    n: i64,
    combine: impl Fn(i64, i64) -> i64,
) -> Vec<PairBlock> {
    let modulus = match (c.grading, d.grading) {
        (Grading::Cyclic { modulus }, _) | (_, Grading::Cyclic { modulus }) => Some(modulus),
        _ => None,
    };
    let norm = |x: i64| modulus.map_or(x, |m| x.rem_euclid(m));
    let target = norm(n);
    let mut out = Vec::new();
    let mut offset = 0;
    for a in c.degrees() {
        for b in d.degrees() {
            if norm(combine(a, b)) != target {
                continue;
            }
            let len = c.rank(a) * d.rank(b);
            if len == 0 {
                continue;
            }
            out.push(PairBlock { left: a, right: b, offset, len });
            offset += len;
        }
    }
    out
}

fn find_block(layout: &[PairBlock], a: i64, b: i64) -> Option<PairBlock> {
    layout.iter().copied().find(|p| p.left == a && p.right == b)
}

/// H_k of a complex: free rank, torsion, cycle representatives and
/// coordinates of cycles along them.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    degree: i64,
    sq: Subquotient,
}

impl HomologyGroup {
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn free_rank(&self) -> usize {
        self.sq.free_rank()
    }
    /// Invariant factors > 1 (empty over a field).
    pub fn torsion(&self) -> Vec<Elem> {
        self.sq.torsion()
    }
    /// Number of generators (free plus torsion).
    pub fn num_generators(&self) -> usize {
        self.sq.num_generators()
    }
    pub fn is_zero(&self) -> bool {
        self.num_generators() == 0
    }
    /// Order of each generator; None for free generators.
    pub fn orders(&self) -> &[Option<Elem>] {
        self.sq.orders()
    }
    /// Cycle representatives in chain coordinates, one per generator.
    pub fn representatives(&self) -> Vec<Vec<Elem>> {
        self.sq.representatives()
    }
    /// Coordinates of a cycle along the generators; None if not a cycle.
    pub fn coords(&self, cycle: &[Elem]) -> Option<Vec<Elem>> {
        self.sq.coords(cycle)
    }
}
