use crate::exactlinalg::{rank, Elem, ExactMatrix};

use super::{ComplexError, GradedComplex};

/// A map of graded modules C -> D raising degree by `degree`, stored per
/// source degree. Chain maps satisfy d f = (-1)^degree f d.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: GradedComplex,
    target: GradedComplex,
    degree: i64,
    blocks: Vec<ExactMatrix>,
}

impl ChainMap {
    /// Builds from per-degree matrices and checks the chain-map identity in
    /// every source degree.
    pub fn new(
        source: &GradedComplex,
        target: &GradedComplex,
        degree: i64,
        f: impl FnMut(i64) -> ExactMatrix,
    ) -> Result<Self, ComplexError> {
        let m = Self::new_unchecked(source, target, degree, f)?;
        m.check(&source.degrees())?;
        Ok(m)
    }

    /// Builds without checking the chain-map identity (shapes are checked).
    /// Useful for truncated complexes, where commutation only holds in the
    /// interior; follow with [`ChainMap::check`] on the relevant degrees.
    pub fn new_unchecked(
        source: &GradedComplex,
        target: &GradedComplex,
        degree: i64,
        mut f: impl FnMut(i64) -> ExactMatrix,
    ) -> Result<Self, ComplexError> {
        if source.ring() != target.ring() {
            return Err(ComplexError::RingMismatch(source.ring(), target.ring()));
        }
        let mut blocks = Vec::new();
        for k in source.degrees() {
            let b = f(k);
            if b.rows() != target.rank(k + degree) || b.cols() != source.rank(k) {
                return Err(ComplexError::Shape(format!(
                    "map block at degree {} is {}x{}, expected {}x{}",
                    k,
                    b.rows(),
                    b.cols(),
                    target.rank(k + degree),
                    source.rank(k)
                )));
            }
            blocks.push(b);
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), degree, blocks })
    }

    pub fn identity(c: &GradedComplex) -> Self {
        Self::new_unchecked(c, c, 0, |k| ExactMatrix::identity(c.ring(), c.rank(k))).unwrap()
    }

    pub fn source(&self) -> &GradedComplex {
        &self.source
    }
    pub fn target(&self) -> &GradedComplex {
        &self.target
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// The block C_k -> D_{k+degree}.
    pub fn matrix(&self, k: i64) -> ExactMatrix {
        let degs = self.source.degrees();
        let k = self.source.grading().normalize(k);
        match degs.iter().position(|&x| x == k) {
            Some(i) => self.blocks[i].clone(),
            None => ExactMatrix::zeros(self.source.ring(), self.target.rank(k + self.degree), self.source.rank(k)),
        }
    }

    pub fn apply(&self, k: i64, v: &[Elem]) -> Vec<Elem> {
        self.matrix(k).mul_vec(v)
    }

    pub fn commutes_at(&self, k: i64) -> bool {
        let ring = self.source.ring();
        let lhs = self.target.diff(k + self.degree).mul(&self.matrix(k));
        let rhs = self.matrix(k - 1).mul(&self.source.diff(k)).scale(&ring.sign(self.degree.rem_euclid(2) == 1));
        lhs == rhs
    }

    /// Checks d f = (-1)^degree f d at each listed source degree.
    pub fn check(&self, degrees: &[i64]) -> Result<(), ComplexError> {
        for &k in degrees {
            if !self.commutes_at(k) {
                return Err(ComplexError::NotChainMap(k));
            }
        }
        Ok(())
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        let deg = self.degree + other.degree;
        ChainMap::new_unchecked(&other.source, &self.target, deg, |k| {
            self.matrix(k + other.degree).mul(&other.matrix(k))
        })
    }

    /// Matrix of H_k(C) -> H_{k+degree}(D) in the generator bases of the two
    /// homology groups (column j = image of generator j).
    pub fn induced(&self, k: i64) -> Result<ExactMatrix, ComplexError> {
        let hs = self.source.homology(k)?;
        let ht = self.target.homology(k + self.degree)?;
        let ring = self.source.ring();
        let cols: Vec<Vec<Elem>> = hs
            .representatives()
            .iter()
            .map(|z| ht.coords(&self.apply(k, z)).expect("image of a cycle is a cycle"))
            .collect();
        Ok(ExactMatrix::from_columns(ring, ht.num_generators(), &cols))
    }
}

/// Positions where a sequence of linear maps fails to be exact.
///
/// `maps[i]` and `maps[i+1]` are consecutive (`maps[i+1] ∘ maps[i]`); the
/// returned indices `i` are those where the composite is nonzero or
/// rank(maps[i]) + rank(maps[i+1]) differs from the dimension of the middle
/// term. Meant for maps between homology groups over a field.
pub fn les_defects(maps: &[ExactMatrix]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..maps.len().saturating_sub(1) {
        let (f, g) = (&maps[i], &maps[i + 1]);
        assert_eq!(f.rows(), g.cols(), "consecutive maps do not compose");
        if !g.mul(f).is_zero() || rank(f) + rank(g) != f.rows() {
            out.push(i);
        }
    }
    out
}
