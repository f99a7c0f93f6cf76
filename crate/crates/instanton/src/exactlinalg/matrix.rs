use num_traits::Zero;
use std::fmt;

use super::ring::{format_elem, Elem, Ring};
use super::LinalgError;

/// Dense matrix over one of the coefficient rings, row-major.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, data: vec![Elem::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds from rows of small integers (mapped into the ring).
    pub fn from_i64(ring: Ring, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(*v));
            }
        }
        m
    }

    /// Densifies sparse `(row, col, value)` triplets. Repeated positions add.
    pub fn from_triplets(
        ring: Ring,
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, Elem)],
    ) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(ring, rows, cols);
        for (i, j, v) in triplets {
            if *i >= rows || *j >= cols {
                return Err(LinalgError::Shape(format!(
                    "triplet ({}, {}) outside {}x{}",
                    i, j, rows, cols
                )));
            }
            if !ring.contains(v) {
                return Err(LinalgError::NotInRing(format_elem(v)));
            }
            let cur = m.get(*i, *j).clone();
            m.set(*i, *j, ring.add(&cur, v));
        }
        Ok(m)
    }

    pub fn from_columns(ring: Ring, rows: usize, columns: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Nonzero entries as triplets.
    pub fn triplets(&self) -> Vec<(usize, usize, Elem)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.ring, other.ring, "ring mismatch in product");
        let r = self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, r.mul_add(&cur, a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        let r = self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = Elem::zero();
                for (j, x) in v.iter().enumerate() {
                    acc = r.mul_add(&acc, self.get(i, j), x);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let r = self.ring;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| r.add(a, b)).collect();
        ExactMatrix { ring: r, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.add(&other.scale(&self.ring.from_i64(-1)))
    }

    pub fn scale(&self, c: &Elem) -> ExactMatrix {
        let r = self.ring;
        let data = self.data.iter().map(|a| r.mul(a, c)).collect();
        ExactMatrix { ring: r, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scale(&self.ring.from_i64(-1))
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let mut m = Self::zeros(self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.ring, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn vcat(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = Self::zeros(self.ring, self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }

    /// Maps every entry into another ring (integers into Q or F_p).
    pub fn change_ring(&self, ring: Ring) -> ExactMatrix {
        let data = self.data.iter().map(|a| ring.normalize(a.clone())).collect();
        ExactMatrix { ring, rows: self.rows, cols: self.cols, data }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        let r = self.ring;
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if s.is_zero() {
                continue;
            }
            let d = &mut self.data[dst * self.cols + j];
            *d = r.mul_add(d, c, &s);
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        let r = self.ring;
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if s.is_zero() {
                continue;
            }
            let d = &mut self.data[i * self.cols + dst];
            *d = r.mul_add(d, c, &s);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Elem) {
        let r = self.ring;
        for j in 0..self.cols {
            let d = &mut self.data[i * self.cols + j];
            *d = r.mul(d, c);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &Elem) {
        let r = self.ring;
        for i in 0..self.rows {
            let d = &mut self.data[i * self.cols + j];
            *d = r.mul(d, c);
        }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_elem(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
