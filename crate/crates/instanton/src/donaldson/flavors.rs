//! Homology of the four flavors. The ℤ/8-graded towers are unrolled to ℤ
//! with the orbit gradings lifted into a fundamental domain of levels; the
//! ℤ-graded answer in degree k is the part of the level-filtered homology
//! whose levels lie in that domain.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::towers::{build_dci_minus, build_dci_plus, build_dci_tate, build_reduced_minus, build_reduced_plus};
use super::{build_dci, require_valid, DciGen, DonaldsonDatum, DonaldsonError, Flavor, Stab, Summand, TowerComplex, TowerKey, PERIOD};
use crate::exactlinalg::{rank, Elem, ExactMatrix, FilteredReducer, Ring, SparseVec};
use crate::gradedcomplex::{ChainMap, ComplexError, GradedComplex};
use crate::spectral::{PeriodicFiltration, SpectralSequence};

/// Lowest level of the fundamental domain used for reported groups.
const REPORT_BASE: i64 = -4;

/// The lift of an orbit grading into [base, base + 8).
pub(crate) fn orbit_lift(grading: i64, base: i64) -> i64 {
    (grading - base).rem_euclid(PERIOD) + base
}

/// Tower truncation used for a window of unrolled degrees.
pub fn truncation_for_window(window: i64) -> usize {
    (window.max(0) / 4 + 4) as usize
}

/// A tower complex unrolled to ℤ in a degree window and filtered by level.
#[derive(Clone, Debug)]
pub struct Unrolled {
    pub periodic: PeriodicFiltration,
    pub tower: TowerComplex,
    pub base: i64,
    lifts: HashMap<TowerKey, (i64, i64)>,
}

/// Level-filtered homology in one unrolled degree, restricted to the
/// fundamental domain.
struct FdGroup {
    reducer: FilteredReducer,
    /// Indices into the reducer's representatives with level in the domain.
    domain: Vec<usize>,
}

fn sparse_columns(m: &ExactMatrix) -> Vec<SparseVec> {
    let mut cols = vec![SparseVec::new(); m.cols()];
    for (i, j, v) in m.triplets() {
        cols[j].insert(i, v);
    }
    cols
}

impl Unrolled {
    pub fn new(datum: &DonaldsonDatum, tower: &TowerComplex, base: i64, lo: i64, hi: i64) -> Result<Self, DonaldsonError> {
        Self::with_levels(datum, tower, base, lo, hi, i64::MIN..=i64::MAX)
    }

    /// The unrolled complex cut to the levels where the tower truncation is
    /// invisible: a Borel tower is completed in U* towards low levels and
    /// a coBorel tower is finitely supported towards high levels, so the
    /// cut F_ceil / F_floor-1 models both, while cutting at a U-power does
    /// not once U_Fl fails to be nilpotent.
    pub fn completed(datum: &DonaldsonDatum, tower: &TowerComplex, base: i64, lo: i64, hi: i64) -> Result<Self, DonaldsonError> {
        let k = tower.truncation as i64;
        let floor = if matches!(tower.flavor, Flavor::Plus | Flavor::Tate) { hi - 4 * k } else { i64::MIN };
        let ceil = if matches!(tower.flavor, Flavor::Minus | Flavor::Tate) { lo + 4 * k - 3 } else { i64::MAX };
        if floor > base - 4 || ceil < base + PERIOD + 3 {
            return Err(DonaldsonError::TruncationTooSmall { order: tower.truncation, needed: ((hi - lo) / 4 + 3) as usize });
        }
        Self::with_levels(datum, tower, base, lo, hi, floor..=ceil)
    }

    fn with_levels(
        datum: &DonaldsonDatum,
        tower: &TowerComplex,
        base: i64,
        lo: i64,
        hi: i64,
        levels: std::ops::RangeInclusive<i64>,
    ) -> Result<Self, DonaldsonError> {
        let w = tower.flavor.weight();
        let mut lifts = HashMap::new();
        let c = tower.complex();
        for k in c.degrees() {
            for key in tower.keyed.keys(k) {
                let l = orbit_lift(datum.orbits()[key.0.orbit].grading, base);
                lifts.insert(*key, (l + key.0.summand.offset() + w * key.1, l));
            }
        }
        let periodic = PeriodicFiltration::unroll_levels(c, |k, i| lifts[&tower.keyed.keys(k)[i]], lo, hi, levels)?;
        Ok(Unrolled { periodic, tower: tower.clone(), base, lifts })
    }

    pub fn complex(&self) -> &GradedComplex {
        self.periodic.filtered.complex()
    }

    /// Tower generator and period copy of unrolled generator i in degree k.
    pub fn generator(&self, k: i64, i: usize) -> (TowerKey, i64) {
        let (kc, ic, m) = self.periodic.keyed.keys(k)[i];
        (self.tower.keyed.keys(kc)[ic], m)
    }

    fn fd(&self, k: i64) -> FdGroup {
        let c = self.complex();
        let levels = self.periodic.filtered.levels(k);
        let reducer =
            FilteredReducer::new(c.ring(), levels, &sparse_columns(&c.diff(k)), &sparse_columns(&c.diff(k + 1)));
        let domain = reducer
            .rep_filtrations()
            .iter()
            .enumerate()
            .filter(|(_, p)| (self.base..self.base + PERIOD).contains(*p))
            .map(|(i, _)| i)
            .collect();
        FdGroup { reducer, domain }
    }

    /// Extends a ℤ/8-graded map between towers, given on generators, to the
    /// unrolled complexes. Copies are matched by degree; terms leaving the
    /// target window are dropped.
    pub fn map_to(
        &self,
        target: &Unrolled,
        degree: i64,
        f: impl Fn(&TowerKey) -> Vec<(TowerKey, Elem)>,
    ) -> Result<ChainMap, ComplexError> {
        let (src, tgt) = (self.complex(), target.complex());
        let ring = src.ring();
        ChainMap::new_unchecked(src, tgt, degree, |k| {
            let mut m = ExactMatrix::zeros(ring, tgt.rank(k + degree), src.rank(k));
            for i in 0..src.rank(k) {
                let (key, _) = self.generator(k, i);
                for (t, c) in f(&key) {
                    let (lt, _) = target.lifts[&t];
                    let shift = k + degree - lt;
                    assert_eq!(shift.rem_euclid(PERIOD), 0, "map does not respect ℤ/8 degrees");
                    let (kt, jt) = target.tower.keyed.position(&t).expect("target generator");
                    if let Some((d, j)) = target.periodic.keyed.position(&(kt, jt, shift / PERIOD)) {
                        debug_assert_eq!(d, k + degree);
                        m.set(j, i, c);
                    }
                }
            }
            m
        })
    }

    fn leading_label(&self, datum: &DonaldsonDatum, k: i64, rep: &SparseVec) -> String {
        let levels = self.periodic.filtered.levels(k);
        let lead = rep.keys().copied().max_by_key(|&i| (levels[i], i)).expect("nonzero representative");
        let (key, _) = self.generator(k, lead);
        self.tower.label(datum, &key)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GroupEntry {
    pub free_rank: usize,
    pub torsion: Vec<String>,
    /// Leading term of each generator's representative.
    pub generators: Vec<String>,
}

/// Homology of one flavor. Tilde is keyed by ℤ/8 class, the tower flavors
/// by unrolled degree; `u_maps[k]` is U : I_k → I_{k-4} in the generator
/// bases of the two groups.
#[derive(Clone, Debug, PartialEq)]
pub struct FlavorResult {
    pub flavor: Flavor,
    pub ring: Ring,
    pub window: i64,
    pub truncation: usize,
    pub groups: BTreeMap<i64, GroupEntry>,
    pub u_maps: BTreeMap<i64, ExactMatrix>,
    pub stabilized: bool,
}

impl FlavorResult {
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.groups.iter().map(|(k, g)| (*k, g.free_rank + g.torsion.len())).collect()
    }

    pub fn rank(&self, k: i64) -> usize {
        self.groups.get(&k).map_or(0, |g| g.free_rank + g.torsion.len())
    }

    /// Whether every reported U-map is square and invertible.
    pub fn u_invertible(&self) -> bool {
        self.u_maps.values().all(|m| m.rows() == m.cols() && rank(m) == m.rows())
    }
}

/// Fundamental-domain ranks of a tower in unrolled degrees
/// [-window/2, window/2], without stabilization.
pub fn unrolled_ranks(datum: &DonaldsonDatum, tower: &TowerComplex, window: i64) -> Result<BTreeMap<i64, usize>, DonaldsonError> {
    let half = window / 2;
    let un = Unrolled::completed(datum, tower, REPORT_BASE, -half - 2, half + 2)?;
    Ok((-half..=half).map(|d| (d, un.fd(d).domain.len())).collect())
}

fn tilde(datum: &DonaldsonDatum) -> Result<FlavorResult, DonaldsonError> {
    let dci = build_dci(datum)?;
    let c = &dci.keyed.complex;
    let mut groups = BTreeMap::new();
    for k in 0..PERIOD {
        let h = c.homology(k)?;
        let generators = h
            .representatives()
            .iter()
            .map(|v| {
                let terms = dci.keyed.describe(k, v);
                terms.last().map(|(g, _)| g.label(datum)).unwrap_or_default()
            })
            .collect();
        let torsion = h.torsion().iter().map(|t| t.to_string()).collect();
        groups.insert(k, GroupEntry { free_rank: h.free_rank(), torsion, generators });
    }
    Ok(FlavorResult {
        flavor: Flavor::Tilde,
        ring: datum.ring(),
        window: PERIOD,
        truncation: 0,
        groups,
        u_maps: BTreeMap::new(),
        stabilized: true,
    })
}

fn tower_for(datum: &DonaldsonDatum, flavor: Flavor, k: usize) -> Result<TowerComplex, DonaldsonError> {
    match flavor {
        Flavor::Plus => build_reduced_plus(datum, k),
        Flavor::Minus => build_reduced_minus(datum, k),
        Flavor::Tate => build_dci_tate(datum, k),
        Flavor::Tilde => unreachable!("tilde is not a tower"),
    }
}

fn tower_result(datum: &DonaldsonDatum, flavor: Flavor, window: i64) -> Result<FlavorResult, DonaldsonError> {
    let k = truncation_for_window(window);
    let tower = tower_for(datum, flavor, k)?;
    let half = window / 2;
    let un = Unrolled::completed(datum, &tower, REPORT_BASE, -half - 6, half + 2)?;
    let u = un.map_to(&un, -4, |key| tower.u_terms(key))?;
    let mut fds = BTreeMap::new();
    for d in -half - 4..=half {
        fds.insert(d, un.fd(d));
    }
    let mut groups = BTreeMap::new();
    let mut u_maps = BTreeMap::new();
    for d in -half..=half {
        let g = &fds[&d];
        let reps = g.reducer.representatives();
        let generators = g.domain.iter().map(|&i| un.leading_label(datum, d, &reps[i])).collect();
        groups.insert(d, GroupEntry { free_rank: g.domain.len(), torsion: vec![], generators });
        let t = &fds[&(d - 4)];
        let mut m = ExactMatrix::zeros(datum.ring(), t.domain.len(), g.domain.len());
        let ud = u.matrix(d);
        for (col, &i) in g.domain.iter().enumerate() {
            let rep = &reps[i];
            let mut dense = vec![Elem::zero(); un.complex().rank(d)];
            for (j, v) in rep {
                dense[*j] = v.clone();
            }
            let img: SparseVec =
                ud.mul_vec(&dense).into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            // reps in the domain stay clear of the top tower power, where the
            // reduced U can fail to commute with d
            let coords = t.reducer.coords(&img).ok_or(ComplexError::NotChainMap(d))?;
            for (row, &j) in t.domain.iter().enumerate() {
                m.set(row, col, coords[j].clone());
            }
        }
        u_maps.insert(d, m);
    }
    Ok(FlavorResult { flavor, ring: datum.ring(), window, truncation: k, groups, u_maps, stabilized: false })
}

/// Homology of one flavor in unrolled degrees [-window/2, window/2] (Tilde:
/// the eight ℤ/8 classes). Tower flavors are computed at `window` and at
/// `window + 8` with a longer truncation, and must agree.
pub fn compute(datum: &DonaldsonDatum, flavor: Flavor, window: i64) -> Result<FlavorResult, DonaldsonError> {
    require_valid(datum)?;
    if flavor == Flavor::Tilde {
        return tilde(datum);
    }
    if window < 8 {
        return Err(DonaldsonError::TruncationTooSmall { order: truncation_for_window(window), needed: 4 });
    }
    let mut narrow = tower_result(datum, flavor, window)?;
    let wide = tower_result(datum, flavor, window + 8)?;
    let bad: Vec<i64> = narrow.groups.keys().copied().filter(|&d| narrow.rank(d) != wide.rank(d)).collect();
    if !bad.is_empty() {
        return Err(DonaldsonError::StabilizationFailed { flavor, narrow: window, wide: window + 8, degrees: bad });
    }
    narrow.stabilized = true;
    Ok(narrow)
}

/// Σ (-1)^k rank Ĩ_k over the eight classes.
pub fn homology_euler_characteristic(datum: &DonaldsonDatum) -> Result<i64, DonaldsonError> {
    let r = tilde(datum)?;
    Ok(r.groups.iter().map(|(k, g)| if k % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum())
}

/// Tate homology read off the reducible orbits: an SO2 orbit at grading g
/// gives rank 1 in every degree ≡ g mod 2, a Full orbit in every degree
/// ≡ g mod 4. U is invertible.
pub fn tate_via_localization(datum: &DonaldsonDatum, window: i64) -> Result<FlavorResult, DonaldsonError> {
    require_valid(datum)?;
    let ring = datum.ring();
    let half = window / 2;
    // (label, U-power sign) of each generator in degree d
    let gens_at = |d: i64| -> Vec<(String, bool)> {
        let mut out = Vec::new();
        for stab in [Stab::So2, Stab::Full] {
            for o in datum.indices(stab) {
                let l = orbit_lift(datum.orbits()[o].grading, REPORT_BASE);
                let offsets: &[i64] = if stab == Stab::So2 { &[0, 2] } else { &[0] };
                for &off in offsets {
                    if (l + off - d).rem_euclid(4) == 0 {
                        let n = (l + off - d) / 4;
                        let summand = if off == 2 { Summand::So2Shift } else if stab == Stab::So2 { Summand::So2 } else { Summand::Full };
                        let label = DciGen::new(summand, o).label(datum);
                        let label = if n == 0 { label } else { format!("{}·U^{}", label, n) };
                        out.push((label, n.rem_euclid(2) == 1));
                    }
                }
            }
        }
        out
    };
    let mut groups = BTreeMap::new();
    let mut u_maps = BTreeMap::new();
    for d in -half..=half {
        let gens = gens_at(d);
        let mut m = ExactMatrix::zeros(ring, gens.len(), gens.len());
        for (i, (_, odd)) in gens.iter().enumerate() {
            m.set(i, i, ring.sign(*odd));
        }
        u_maps.insert(d, m);
        groups.insert(d, GroupEntry { free_rank: gens.len(), torsion: vec![], generators: gens.into_iter().map(|g| g.0).collect() });
    }
    Ok(FlavorResult { flavor: Flavor::Tate, ring, window, truncation: 0, groups, u_maps, stabilized: true })
}

/// Checks the exact triangle I⁻ → I^∞ → I⁺ → on the truncated towers: the
/// coBorel tower includes into the Laurent tower with quotient the Borel
/// tower shifted by 4, via x U^{-(n+1)} ↦ (-1)^{n|x|} x U*ⁿ. Returns the
/// ℤ/8 classes where the long exact sequence fails (empty when it holds).
pub fn exact_triangle_defects(datum: &DonaldsonDatum, k: usize) -> Result<Vec<i64>, DonaldsonError> {
    require_valid(datum)?;
    let ring = datum.ring();
    let minus = build_dci_minus(datum, k)?;
    let tate = build_dci_tate(datum, k)?;
    let plus = build_dci_plus(datum, k - 1)?;
    let block = |src: &TowerComplex, tgt: &TowerComplex, deg: i64, f: &dyn Fn(&TowerKey) -> Option<(TowerKey, Elem)>| {
        ChainMap::new(src.complex(), tgt.complex(), deg, |d| {
            let cols: Vec<Vec<Elem>> = src
                .keyed
                .keys(d)
                .iter()
                .map(|key| {
                    let terms: Vec<(TowerKey, Elem)> = f(key).into_iter().collect();
                    tgt.keyed.vector(d + deg, &terms).expect("degree-compatible map")
                })
                .collect();
            ExactMatrix::from_columns(ring, tgt.complex().rank(d + deg), &cols)
        })
    };
    let incl = block(&minus, &tate, 0, &|key| Some((*key, ring.one())))?;
    let proj = block(&tate, &plus, -4, &|&(g, p)| {
        (p < 0).then(|| {
            let n = -p - 1;
            ((g, n), ring.sign(n % 2 == 1 && g.is_odd(datum)))
        })
    })?;
    let mut bad = Vec::new();
    for d in 0..PERIOD {
        let dim = |c: &TowerComplex, d: i64| -> Result<usize, ComplexError> { Ok(c.complex().homology(d)?.free_rank()) };
        let (a_prev, b, c) = (dim(&minus, d - 1)?, dim(&tate, d)?, dim(&plus, d - 4)?);
        let i = rank(&incl.induced(d)?);
        let i_prev = rank(&incl.induced(d - 1)?);
        let p = rank(&proj.induced(d)?);
        if b != i + p || c + i_prev != p + a_prev {
            bad.push(d);
        }
    }
    Ok(bad)
}

/// The spectral sequence of the level filtration on an unrolled flavor,
/// with levels p in [0, 8). Tower entries far enough along the tower to
/// feel the truncation are removed.
#[derive(Clone, Debug)]
pub struct IndexSpectralSequence {
    pub flavor: Flavor,
    pub truncation: usize,
    pub ss: SpectralSequence,
}

pub fn index_spectral_sequence(datum: &DonaldsonDatum, flavor: Flavor, r_max: usize) -> Result<IndexSpectralSequence, DonaldsonError> {
    require_valid(datum)?;
    let base = 0;
    let r = r_max as i64;
    let (tower, truncation) = if flavor == Flavor::Tilde {
        (super::towers::tilde_tower(datum)?, 0)
    } else {
        let k = r_max / 4 + 4;
        (tower_for(datum, flavor, k)?, k)
    };
    let w = flavor.weight();
    let kmax = truncation as i64;
    let (qlo, qhi) = match flavor {
        Flavor::Tilde => (0, 3),
        Flavor::Plus => (0, 3 + 4 * kmax),
        Flavor::Minus => (-4 * kmax, 3),
        Flavor::Tate => (-4 * kmax, 3 + 4 * kmax),
    };
    let un = Unrolled::new(datum, &tower, base, base - r + qlo - 3, base + PERIOD + qhi + r + 1)?;
    let mut ss = un.periodic.spectral_sequence(r_max, base)?;
    if w != 0 {
        let limit = 4 * kmax - r - 4;
        let keep = |q: i64| match flavor {
            Flavor::Plus => q <= limit,
            Flavor::Minus => q >= -limit,
            _ => q.abs() <= limit,
        };
        for page in &mut ss.pages {
            page.retain_entries(|&(_, q)| keep(q));
        }
    }
    Ok(IndexSpectralSequence { flavor, truncation, ss })
}
