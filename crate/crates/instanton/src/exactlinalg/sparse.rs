use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

use super::ring::{Elem, Ring};

/// Sparse vector keyed by coordinate index.
pub type SparseVec = BTreeMap<usize, Elem>;

fn axpy(ring: Ring, y: &mut SparseVec, a: &Elem, x: &SparseVec) {
    for (i, v) in x {
        let e = y.entry(*i).or_insert_with(Elem::zero);
        *e = ring.mul_add(e, a, v);
        if e.is_zero() {
            y.remove(i);
        }
    }
}

fn low(v: &SparseVec) -> Option<(usize, &Elem)> {
    v.iter().next_back().map(|(i, x)| (*i, x))
}

/// Filtered homology in one degree over a field, by column reduction in a
/// basis ordered by filtration.
///
/// Given C_{k+1} -> C_k -> C_{k-1} and a filtration value for each basis
/// element of C_k, produces cycle representatives adapted to the filtration
/// and coordinates of arbitrary cycles in that basis. The number of
/// representatives with filtration p is the rank of gr_p H_k.
#[derive(Clone, Debug)]
pub struct FilteredReducer {
    ring: Ring,
    /// position -> original index in C_k
    order: Vec<usize>,
    /// original index -> position
    pos: Vec<usize>,
    filt: Vec<i64>,
    /// reduced boundaries keyed by low position (vectors in positions)
    boundaries: HashMap<usize, SparseVec>,
    /// essential cycles keyed by low position, leading coefficient 1
    essentials: BTreeMap<usize, SparseVec>,
}

impl FilteredReducer {
    /// `d_out[j]` is the image of basis element j of C_k (indices in C_{k-1},
    /// unused here beyond the cycle test); `d_in[j]` is the image of basis
    /// element j of C_{k+1}, with indices in C_k.
    pub fn new(ring: Ring, filt: &[i64], d_out: &[SparseVec], d_in: &[SparseVec]) -> Self {
        assert!(ring.is_field(), "filtered reduction needs a field");
        let n = filt.len();
        assert_eq!(d_out.len(), n);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (filt[i], i));
        let mut pos = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }

        // cycles: reduce columns of d_out in filtration order, tracking the
        // combination (in positions) that produced each column
        let mut pivots: HashMap<usize, (SparseVec, SparseVec)> = HashMap::new();
        let mut cycles: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for p in 0..n {
            let mut col = d_out[order[p]].clone();
            let mut comb: SparseVec = SparseVec::new();
            comb.insert(p, ring.one());
            while let Some((l, lv)) = low(&col) {
                match pivots.get(&l) {
                    Some((pc, pcomb)) => {
                        let f = ring.neg(&ring.div_exact(lv, &pc[&l]).unwrap());
                        axpy(ring, &mut col, &f, pc);
                        axpy(ring, &mut comb, &f, pcomb);
                    }
                    None => break,
                }
            }
            match low(&col) {
                Some((l, _)) => {
                    pivots.insert(l, (col, comb));
                }
                None => {
                    cycles.insert(p, comb);
                }
            }
        }

        // boundaries: echelon form of the image of d_in, by low position
        let mut boundaries: HashMap<usize, SparseVec> = HashMap::new();
        for c in d_in {
            let mut col: SparseVec = c.iter().map(|(i, v)| (pos[*i], v.clone())).collect();
            while let Some((l, lv)) = low(&col) {
                match boundaries.get(&l) {
                    Some(b) => {
                        let f = ring.neg(&ring.div_exact(lv, &b[&l]).unwrap());
                        axpy(ring, &mut col, &f, b);
                    }
                    None => break,
                }
            }
            if let Some((l, _)) = low(&col) {
                boundaries.insert(l, col);
            }
        }
        let essentials =
            cycles.into_iter().filter(|(p, _)| !boundaries.contains_key(p)).collect();
        FilteredReducer { ring, order, pos, filt: filt.to_vec(), boundaries, essentials }
    }

    pub fn rank(&self) -> usize {
        self.essentials.len()
    }

    /// Filtration value of each representative, in representative order.
    pub fn rep_filtrations(&self) -> Vec<i64> {
        self.essentials.keys().map(|&p| self.filt[self.order[p]]).collect()
    }

    /// Cycle representatives, in original C_k indices.
    pub fn representatives(&self) -> Vec<SparseVec> {
        self.essentials
            .values()
            .map(|z| z.iter().map(|(p, v)| (self.order[*p], v.clone())).collect())
            .collect()
    }

    /// Coordinates of a cycle along the representatives. None if `v` is not
    /// a cycle (it then cannot be reduced to zero).
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<Elem>> {
        let ring = self.ring;
        let mut w: SparseVec = v.iter().map(|(i, x)| (self.pos[*i], x.clone())).collect();
        let mut out: BTreeMap<usize, Elem> = BTreeMap::new();
        while let Some((l, lv)) = low(&w) {
            let lv = lv.clone();
            if let Some(b) = self.boundaries.get(&l) {
                let f = ring.neg(&ring.div_exact(&lv, &b[&l]).unwrap());
                axpy(ring, &mut w, &f, b);
            } else if let Some(z) = self.essentials.get(&l) {
                let f = ring.neg(&lv);
                axpy(ring, &mut w, &f, z);
                out.insert(l, lv);
            } else {
                return None;
            }
        }
        Some(
            self.essentials
                .keys()
                .map(|p| out.get(p).cloned().unwrap_or_else(Elem::zero))
                .collect(),
        )
    }
}
