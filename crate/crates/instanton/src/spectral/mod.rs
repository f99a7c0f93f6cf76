//! Filtered complexes, multicomplexes and periodic filtrations, with
//! spectral sequence pages computed as explicit subquotients.
//!
//! Pages use E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}) with
//! Z^r_p = F_p ∩ d⁻¹(F_{p-r}), and E^0_p = F_p / F_{p-1}. Entries are indexed
//! by (p, q) with total degree p + q; d_r maps (p, q) to (p-r, q+r-1).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exactlinalg::{kernel_basis, smith_normal_form, Elem, ExactMatrix, Ring, Subquotient};
use crate::gradedcomplex::{ChainMap, ComplexBuilder, ComplexError, GradedComplex, KeyedComplex};


#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("differential raises filtration at degree {degree}, generator {index}")]
    NotFiltered { degree: i64, index: usize },
    #[error("not a multicomplex: {0}")]
    NotMulticomplex(String),
    #[error("window too narrow: {0}")]
    WindowTooNarrow(String),
    #[error("filtrations need an integer grading")]
    Unsupported,
    #[error("page isomorphism without a homology isomorphism at degree {0}")]
    Inconsistent(i64),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// An integer-graded complex with a filtration level on each basis vector;
/// F_p is spanned by the basis vectors of level ≤ p.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: GradedComplex,
    levels: BTreeMap<i64, Vec<i64>>,
}

impl FilteredComplex {
    pub fn new(complex: GradedComplex, level: impl Fn(i64, usize) -> i64) -> Result<Self, SpectralError> {
        if complex.grading().is_cyclic() {
            return Err(SpectralError::Unsupported);
        }
        let levels: BTreeMap<i64, Vec<i64>> =
            complex.degrees().into_iter().map(|k| (k, (0..complex.rank(k)).map(|i| level(k, i)).collect())).collect();
        let f = FilteredComplex { complex, levels };
        for k in f.complex.degrees() {
            for (j, i, _) in f.complex.diff(k).triplets() {
                if f.level(k - 1, j) > f.level(k, i) {
                    return Err(SpectralError::NotFiltered { degree: k, index: i });
                }
            }
        }
        Ok(f)
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn level(&self, k: i64, i: usize) -> i64 {
        self.levels[&k][i]
    }

    pub fn levels(&self, k: i64) -> &[i64] {
        self.levels.get(&k).map_or(&[], |v| v.as_slice())
    }

    /// Degrees whose pages are exact: the valid range of the complex.
    pub fn exact_degrees(&self) -> Vec<i64> {
        let degs = self.complex.degrees();
        match self.complex.valid_range() {
            Some((lo, hi)) => degs.into_iter().filter(|k| (lo..=hi).contains(k)).collect(),
            None => degs,
        }
    }

    fn ring(&self) -> Ring {
        self.complex.ring()
    }

    fn span(&self, p: i64, n: i64) -> ExactMatrix {
        let ring = self.ring();
        let lv = self.levels(n);
        let idx: Vec<usize> = (0..lv.len()).filter(|&i| lv[i] <= p).collect();
        let mut m = ExactMatrix::zeros(ring, lv.len(), idx.len());
        for (c, &i) in idx.iter().enumerate() {
            m.set(i, c, ring.one());
        }
        m
    }

    /// Basis of Z^r_p in degree n (r ≥ 1), or of F_p for r ≤ 0.
    fn cycles(&self, r: i64, p: i64, n: i64) -> ExactMatrix {
        if r <= 0 {
            return self.span(p, n);
        }
        let ring = self.ring();
        let src = self.levels(n);
        let tgt = self.levels(n - 1);
        let s: Vec<usize> = (0..src.len()).filter(|&i| src[i] <= p).collect();
        let t: Vec<usize> = (0..tgt.len()).filter(|&j| tgt[j] > p - r).collect();
        let k = kernel_basis(&self.complex.diff(n).submatrix(&t, &s));
        let mut out = ExactMatrix::zeros(ring, src.len(), k.cols());
        for c in 0..k.cols() {
            for (a, &i) in s.iter().enumerate() {
                out.set(i, c, k.get(a, c).clone());
            }
        }
        out
    }

    fn entry(&self, r: i64, p: i64, n: i64) -> Subquotient {
        let numer = self.cycles(r, p, n);
        let denom = if r == 0 {
            self.span(p - 1, n)
        } else {
            let low = self.cycles(r - 1, p - 1, n);
            let high = self.complex.diff(n + 1).mul(&self.cycles(r - 1, p + r - 1, n + 1));
            low.hcat(&high)
        };
        Subquotient::new(numer, &denom)
    }

    /// Pages E^0 … E^{r_max} on the exact degrees.
    pub fn spectral_sequence(&self, r_max: usize) -> Result<SpectralSequence, SpectralError> {
        let degs: BTreeSet<i64> = self.exact_degrees().into_iter().collect();
        let region = (degs.first().copied().unwrap_or(0), degs.last().copied().unwrap_or(-1));
        let mut pages = Vec::new();
        for r in 0..=r_max as i64 {
            let mut groups = BTreeMap::new();
            for &n in &degs {
                let ps: BTreeSet<i64> = self.levels(n).iter().copied().collect();
                for p in ps {
                    groups.insert((p, n - p), self.entry(r, p, n));
                }
            }
            let mut differentials = BTreeMap::new();
            for (&(p, q), sq) in &groups {
                let n = p + q;
                if !degs.contains(&(n - 1)) {
                    continue;
                }
                let key = (p - r, q + r - 1);
                let Some(target) = groups.get(&key) else {
                    if sq.num_generators() > 0 && self.levels(n - 1).contains(&(p - r)) {
                        return Err(SpectralError::WindowTooNarrow(format!("E^{}_{{{},{}}} is missing", r, p - r, q + r - 1)));
                    }
                    continue;
                };
                let d = self.complex.diff(n);
                let cols: Vec<Vec<Elem>> = sq
                    .representatives()
                    .iter()
                    .map(|x| target.coords(&d.mul_vec(x)).expect("d maps Z^r_p into Z^r_{p-r}"))
                    .collect();
                differentials.insert((p, q), ExactMatrix::from_columns(self.ring(), target.num_generators(), &cols));
            }
            let entries = groups.iter().map(|(&k, sq)| (k, PageEntry::of(sq))).collect();
            pages.push(Page { r: r as usize, entries, differentials, degrees: region, groups });
        }
        Ok(SpectralSequence { pages })
    }
}

/// One E^r_{p,q}: free rank and invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PageEntry {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl PageEntry {
    fn of(sq: &Subquotient) -> Self {
        PageEntry { free_rank: sq.free_rank(), torsion: sq.torsion().iter().map(|t| t.to_string()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    pub entries: BTreeMap<(i64, i64), PageEntry>,
    /// d_r out of (p, q), in the generator bases of the two entries.
    pub differentials: BTreeMap<(i64, i64), ExactMatrix>,
    degrees: (i64, i64),
    groups: BTreeMap<(i64, i64), Subquotient>,
}

impl Page {
    /// The entry at (p, q); zero when no generator has that bidegree.
    pub fn entry(&self, p: i64, q: i64) -> Result<PageEntry, SpectralError> {
        if !(self.degrees.0..=self.degrees.1).contains(&(p + q)) {
            return Err(SpectralError::WindowTooNarrow(format!("total degree {} is outside {:?}", p + q, self.degrees)));
        }
        Ok(self.entries.get(&(p, q)).cloned().unwrap_or(PageEntry { free_rank: 0, torsion: vec![] }))
    }

    /// Nonzero entries.
    pub fn support(&self) -> BTreeMap<(i64, i64), PageEntry> {
        self.entries.iter().filter(|(_, e)| !e.is_zero()).map(|(k, e)| (*k, e.clone())).collect()
    }

    /// Drops entries (and the differentials out of them) failing `keep`.
    pub(crate) fn retain_entries(&mut self, keep: impl Fn(&(i64, i64)) -> bool) {
        self.entries.retain(|k, _| keep(k));
        self.differentials.retain(|k, _| keep(k));
        self.groups.retain(|k, _| keep(k));
    }

    /// Nonzero differentials.
    pub fn nonzero_differentials(&self) -> Vec<((i64, i64), &ExactMatrix)> {
        self.differentials.iter().filter(|(_, m)| !m.is_zero()).map(|(k, m)| (*k, m)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub pages: Vec<Page>,
}

impl SpectralSequence {
    pub fn page(&self, r: usize) -> &Page {
        &self.pages[r]
    }

    /// Largest r with a possibly nonzero d_r from the q-support of E^1:
    /// d_r changes q by r - 1, so it needs q and q + r - 1 both occupied.
    pub fn dimension_bound(&self) -> Option<usize> {
        let page = self.pages.get(1)?;
        let qs: BTreeSet<i64> = page.support().keys().map(|k| k.1).collect();
        qs.iter().flat_map(|&a| qs.iter().map(move |&b| b - a + 1)).filter(|&r| r >= 1).max().map(|r| r as usize)
    }

    /// First page from which every computed differential vanishes.
    pub fn degeneration_page(&self) -> usize {
        let last_nonzero = self.pages.iter().rposition(|p| !p.nonzero_differentials().is_empty());
        last_nonzero.map_or(0, |r| r + 1)
    }
}

/// A bigraded module M_{s,t} with components d_r : M_{s,t} → M_{s-r,t+r-1}.
#[derive(Clone, Debug)]
pub struct Multicomplex {
    ring: Ring,
    ranks: BTreeMap<(i64, i64), usize>,
    components: BTreeMap<(usize, i64, i64), ExactMatrix>,
}

impl Multicomplex {
    /// `components[(r, s, t)]` is d_r on M_{s,t}; missing components are zero.
    pub fn new(
        ring: Ring,
        ranks: BTreeMap<(i64, i64), usize>,
        components: BTreeMap<(usize, i64, i64), ExactMatrix>,
    ) -> Result<Self, SpectralError> {
        let m = Multicomplex { ring, ranks, components };
        for (&(r, s, t), d) in &m.components {
            let (rows, cols) = (m.rank(s - r as i64, t + r as i64 - 1), m.rank(s, t));
            if d.rows() != rows || d.cols() != cols || d.ring() != ring {
                return Err(SpectralError::NotMulticomplex(format!("d_{} on ({}, {}) has the wrong shape", r, s, t)));
            }
        }
        let rmax = m.components.keys().map(|k| k.0).max().unwrap_or(0);
        for &(s, t) in m.ranks.keys() {
            for total in 0..=2 * rmax {
                let mut sum = ExactMatrix::zeros(ring, m.rank(s - total as i64, t + total as i64 - 2), m.rank(s, t));
                for j in 0..=total {
                    let i = total - j;
                    let dj = m.component(j, s, t);
                    let di = m.component(i, s - j as i64, t + j as i64 - 1);
                    sum = sum.add(&di.mul(&dj));
                }
                if !sum.is_zero() {
                    return Err(SpectralError::NotMulticomplex(format!(
                        "Σ d_i d_j ≠ 0 for i + j = {} on ({}, {})",
                        total, s, t
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn rank(&self, s: i64, t: i64) -> usize {
        self.ranks.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn component(&self, r: usize, s: i64, t: i64) -> ExactMatrix {
        self.components.get(&(r, s, t)).cloned().unwrap_or_else(|| {
            ExactMatrix::zeros(self.ring, self.rank(s - r as i64, t + r as i64 - 1), self.rank(s, t))
        })
    }

    /// The total complex, degree s + t, filtered by s.
    pub fn total(&self) -> Result<FilteredComplex, SpectralError> {
        let mut b: ComplexBuilder<(i64, i64, usize)> = ComplexBuilder::integer(self.ring);
        for (&(s, t), &n) in &self.ranks {
            for i in 0..n {
                b.add_generator((s, t, i), s + t)?;
            }
        }
        for (&(r, s, t), d) in &self.components {
            for (j, i, c) in d.triplets() {
                b.add_entry(&(s, t, i), &(s - r as i64, t + r as i64 - 1, j), c)?;
            }
        }
        let keyed = b.build()?;
        let lv = |k: i64, i: usize| keyed.keys(k)[i].0;
        FilteredComplex::new(keyed.complex.clone(), lv)
    }
}

/// A complex graded by ℤ/2N unrolled to ℤ in a degree window, with a
/// filtration that shifts by 2N along with the degree.
#[derive(Clone, Debug)]
pub struct PeriodicFiltration {
    pub filtered: FilteredComplex,
    pub period: i64,
    pub keyed: KeyedComplex<(i64, usize, i64)>,
    offsets: (i64, i64),
}

impl PeriodicFiltration {
    /// `lift(k, i)` gives the integer degree ℓ ≡ k and the filtration level
    /// of one lift of generator i in degree class k. Copy m sits in degree
    /// ℓ + 2Nm at level f + 2Nm. Generators are kept in degrees [lo, hi].
    pub fn unroll(
        c: &GradedComplex,
        lift: impl Fn(i64, usize) -> (i64, i64),
        lo: i64,
        hi: i64,
    ) -> Result<Self, SpectralError> {
        Self::unroll_levels(c, lift, lo, hi, i64::MIN..=i64::MAX)
    }

    /// [`PeriodicFiltration::unroll`] keeping only levels in `levels`: the
    /// subquotient F_hi / F_{lo-1}. Since d never raises the level, this is
    /// a complex, and it approximates the completion in both directions.
    pub fn unroll_levels(
        c: &GradedComplex,
        lift: impl Fn(i64, usize) -> (i64, i64),
        lo: i64,
        hi: i64,
        levels: std::ops::RangeInclusive<i64>,
    ) -> Result<Self, SpectralError> {
        let period = match c.grading() {
            crate::gradedcomplex::Grading::Cyclic { modulus } => modulus,
            _ => return Err(SpectralError::Unsupported),
        };
        let ring = c.ring();
        let mut b = ComplexBuilder::integer(ring).window(lo, hi);
        let mut lifts = BTreeMap::new();
        for k in c.degrees() {
            for i in 0..c.rank(k) {
                let (l, f) = lift(k, i);
                if l.rem_euclid(period) != k {
                    return Err(SpectralError::Complex(ComplexError::Shape(format!("lift {} is not ≡ {} mod {}", l, k, period))));
                }
                lifts.insert((k, i), (l, f));
                let m0 = (lo - l).div_euclid(period) - 1;
                for m in m0..=m0 + (hi - lo) / period + 2 {
                    let d = l + period * m;
                    if (lo..=hi).contains(&d) && levels.contains(&(f + period * m)) {
                        b.add_generator((k, i, m), d)?;
                    }
                }
            }
        }
        for k in c.degrees() {
            let kt = (k - 1).rem_euclid(period);
            for (j, i, coef) in c.diff(k).triplets() {
                let (l, _) = lifts[&(k, i)];
                let (lt, _) = lifts[&(kt, j)];
                let m0 = (lo - l).div_euclid(period) - 1;
                for m in m0..=m0 + (hi - lo) / period + 2 {
                    let src = (k, i, m);
                    let shift = l + period * m - 1 - lt;
                    let tgt = (kt, j, shift.div_euclid(period));
                    if b.contains(&src) && b.contains(&tgt) {
                        b.add_entry(&src, &tgt, coef.clone())?;
                    }
                }
            }
        }
        let keyed = b.build()?;
        let complex = keyed.complex.clone().with_valid_range(lo + 1, hi - 1);
        let level = |k: i64, i: usize| {
            let (kc, ic, m) = keyed.keys(k)[i];
            lifts[&(kc, ic)].1 + period * m
        };
        let filtered = FilteredComplex::new(complex, level)?;
        let qs: Vec<i64> = lifts.values().map(|(l, f)| l - f).collect();
        let offsets = (qs.iter().copied().min().unwrap_or(0), qs.iter().copied().max().unwrap_or(0));
        Ok(PeriodicFiltration { filtered, period, keyed, offsets })
    }

    /// Least and greatest q = degree - level over the generators.
    pub fn offsets(&self) -> (i64, i64) {
        self.offsets
    }

    /// Pages restricted to levels p in [p0, p0 + 2N). Fails when the window
    /// does not contain every total degree those entries and their
    /// differentials need.
    pub fn spectral_sequence(&self, r_max: usize, p0: i64) -> Result<SpectralSequence, SpectralError> {
        let (qlo, qhi) = self.offsets;
        let need = (p0 - r_max as i64 + qlo - 1, p0 + self.period - 1 + qhi + r_max as i64);
        let (lo, hi) = self.filtered.complex().valid_range().expect("unrolled complexes carry a valid range");
        if need.0 < lo || need.1 > hi {
            return Err(SpectralError::WindowTooNarrow(format!(
                "levels [{}, {}) through page {} need degrees [{}, {}], have [{}, {}]",
                p0,
                p0 + self.period,
                r_max,
                need.0,
                need.1,
                lo,
                hi
            )));
        }
        let mut ss = self.filtered.spectral_sequence(r_max)?;
        let keep = |k: &(i64, i64)| (p0..p0 + self.period).contains(&k.0);
        for page in &mut ss.pages {
            page.entries.retain(|k, _| keep(k));
            page.differentials.retain(|k, _| keep(k));
            page.groups.retain(|k, _| keep(k));
        }
        Ok(ss)
    }
}

/// Whether a filtration-preserving chain map induces an isomorphism on E^r
/// at every entry of the exact region. When it does, the induced map on
/// homology is also checked on that region.
pub fn compare_on_page(
    f: &ChainMap,
    source: &FilteredComplex,
    target: &FilteredComplex,
    r: usize,
) -> Result<bool, SpectralError> {
    for k in source.exact_degrees() {
        let m = f.matrix(k);
        for (j, i, _) in m.triplets() {
            if target.level(k + f.degree(), j) > source.level(k, i) {
                return Err(SpectralError::NotFiltered { degree: k, index: i });
            }
        }
    }
    let tdegs: BTreeSet<i64> = target.exact_degrees().into_iter().collect();
    let degs: Vec<i64> = source.exact_degrees().into_iter().filter(|k| tdegs.contains(k)).collect();
    let ri = r as i64;
    for &n in &degs {
        let ps: BTreeSet<i64> = source.levels(n).iter().chain(target.levels(n)).copied().collect();
        for p in ps {
            let (a, b) = (source.entry(ri, p, n), target.entry(ri, p, n));
            let m = f.matrix(n);
            let cols: Vec<Vec<Elem>> = a
                .representatives()
                .iter()
                .map(|x| b.coords(&m.mul_vec(x)).expect("filtered maps preserve Z^r"))
                .collect();
            let map = ExactMatrix::from_columns(source.ring(), b.num_generators(), &cols);
            if !is_isomorphism(&map, a.orders(), b.orders()) {
                return Ok(false);
            }
        }
    }
    for &n in &degs {
        if f.source().homology(n).is_err() || f.target().homology(n).is_err() {
            continue;
        }
        let (hs, ht) = (f.source().homology(n)?, f.target().homology(n)?);
        if !is_isomorphism(&f.induced(n)?, hs.orders(), ht.orders()) {
            return Err(SpectralError::Inconsistent(n));
        }
    }
    Ok(true)
}

/// A map between finitely generated modules given in generator bases with
/// the listed orders (None = free) is an isomorphism iff the invariants
/// agree and it is onto.
fn is_isomorphism(m: &ExactMatrix, src: &[Option<Elem>], tgt: &[Option<Elem>]) -> bool {
    let key = |o: &[Option<Elem>]| {
        let mut v: Vec<String> = o.iter().map(|x| x.as_ref().map_or("free".into(), |e| e.to_string())).collect();
        v.sort();
        v
    };
    if key(src) != key(tgt) {
        return false;
    }
    let ring = m.ring();
    let mut rel = ExactMatrix::zeros(ring, tgt.len(), tgt.len());
    for (i, o) in tgt.iter().enumerate() {
        if let Some(x) = o {
            rel.set(i, i, x.clone());
        }
    }
    let s = smith_normal_form(&m.hcat(&rel));
    s.rank == tgt.len() && (0..s.rank).all(|i| ring.is_unit(s.d.get(i, i)))
}

/// True when every key reported by the narrower computation is reported
/// with the same value by the wider one.
pub fn stabilization_check<K: Ord, V: PartialEq>(narrow: &BTreeMap<K, V>, wide: &BTreeMap<K, V>) -> bool {
    narrow.iter().all(|(k, v)| wide.get(k) == Some(v))
}
