use num_traits::{One, Zero};

use super::matrix::ExactMatrix;
use super::ring::{Elem, Ring};

/// Result of a Smith normal form computation: `u * m * v = d`, with the
/// inverses of `u` and `v` kept alongside.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: ExactMatrix,
    pub u_inv: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub v_inv: ExactMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Elem> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Tracker {
    ring: Ring,
    a: ExactMatrix,
    u: ExactMatrix,
    u_inv: ExactMatrix,
    v: ExactMatrix,
    v_inv: ExactMatrix,
}

impl Tracker {
    fn row_add(&mut self, dst: usize, src: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        let nc = self.ring.neg(c);
        self.u_inv.add_col_multiple(src, dst, &nc);
    }

    fn col_add(&mut self, dst: usize, src: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        let nc = self.ring.neg(c);
        self.v_inv.add_row_multiple(src, dst, &nc);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_scale(&mut self, i: usize, unit: &Elem) {
        let inv = self.ring.inv(unit).expect("unit");
        self.a.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &inv);
    }
}

/// Smith normal form over Z (divisibility chain, positive diagonal) or over a
/// field (diagonal of ones followed by zeros).
pub fn smith_normal_form(m: &ExactMatrix) -> Snf {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut t = Tracker {
        ring,
        a: m.clone(),
        u: ExactMatrix::identity(ring, rows),
        u_inv: ExactMatrix::identity(ring, rows),
        v: ExactMatrix::identity(ring, cols),
        v_inv: ExactMatrix::identity(ring, cols),
    };
    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize, num_bigint::BigInt)> = None;
        for i in k..rows {
            for j in k..cols {
                if let Some(s) = ring.euclid_size(t.a.get(i, j)) {
                    if best.as_ref().map_or(true, |b| s < b.2) {
                        let unit = s.is_one();
                        best = Some((i, j, s));
                        if unit {
                            break;
                        }
                    }
                }
            }
            if best.as_ref().map_or(false, |b| b.2.is_one()) {
                break;
            }
        }
        let Some((bi, bj, _)) = best else { break };
        t.row_swap(k, bi);
        t.col_swap(k, bj);

        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if !t.a.get(i, k).is_zero() {
                    let q = ring.euclid_quot(t.a.get(i, k), t.a.get(k, k));
                    t.row_add(i, k, &ring.neg(&q));
                    if !t.a.get(i, k).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in k + 1..cols {
                if !t.a.get(k, j).is_zero() {
                    let q = ring.euclid_quot(t.a.get(k, j), t.a.get(k, k));
                    t.col_add(j, k, &ring.neg(&q));
                    if !t.a.get(k, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot; bring it in
                let mut best: Option<(usize, bool, num_bigint::BigInt)> = None;
                for i in k + 1..rows {
                    if let Some(s) = ring.euclid_size(t.a.get(i, k)) {
                        if best.as_ref().map_or(true, |b| s < b.2) {
                            best = Some((i, true, s));
                        }
                    }
                }
                for j in k + 1..cols {
                    if let Some(s) = ring.euclid_size(t.a.get(k, j)) {
                        if best.as_ref().map_or(true, |b| s < b.2) {
                            best = Some((j, false, s));
                        }
                    }
                }
                if let Some((idx, is_row, _)) = best {
                    if is_row {
                        t.row_swap(k, idx);
                    } else {
                        t.col_swap(k, idx);
                    }
                }
                continue;
            }
            // divisibility of the trailing block by the pivot (only matters over Z)
            let mut offender = None;
            if !ring.is_field() {
                'outer: for i in k + 1..rows {
                    for j in k + 1..cols {
                        let x = t.a.get(i, j);
                        if !x.is_zero() && ring.div_exact(x, t.a.get(k, k)).is_none() {
                            offender = Some(i);
                            break 'outer;
                        }
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = Elem::one();
                    t.row_add(k, i, &one);
                }
                None => break,
            }
        }
        let unit = ring.normal_unit(t.a.get(k, k));
        if !unit.is_one() {
            t.row_scale(k, &unit);
        }
        k += 1;
    }
    Snf { u: t.u, u_inv: t.u_inv, d: t.a, v: t.v, v_inv: t.v_inv, rank: k }
}
