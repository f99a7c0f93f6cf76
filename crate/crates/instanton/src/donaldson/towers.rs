//! Borel and coBorel towers over DCI, the Laurent (Tate) tower, the
//! operators U_Fl + U_alg and their inverses P±, and the reduced models in
//! which the irreducible tower is excised.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use super::{dci_generators, dci_terms, require_valid, DciGen, DonaldsonDatum, DonaldsonError, Summand, PERIOD};
use crate::exactlinalg::{Elem, ExactMatrix, Ring};
use crate::gradedcomplex::{ChainMap, ComplexBuilder, ComplexError, GradedComplex, KeyedComplex};

/// A DCI generator times a power of the tower variable.
pub type TowerKey = (DciGen, i64);

pub(crate) type Chain = BTreeMap<TowerKey, Elem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Tilde,
    Plus,
    Minus,
    Tate,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::Tilde, Flavor::Plus, Flavor::Minus, Flavor::Tate];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Tilde => "tilde",
            Flavor::Plus => "plus",
            Flavor::Minus => "minus",
            Flavor::Tate => "tate",
        }
    }

    pub fn from_name(s: &str) -> Option<Flavor> {
        Flavor::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Degree of one step up the tower: U* has degree 4, U has degree -4.
    pub fn weight(self) -> i64 {
        match self {
            Flavor::Tilde => 0,
            Flavor::Plus => 4,
            Flavor::Minus | Flavor::Tate => -4,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn add_term(ring: Ring, y: &mut Chain, key: TowerKey, c: &Elem) {
    let e = y.entry(key).or_insert_with(Elem::zero);
    *e = ring.add(e, c);
    if e.is_zero() {
        y.remove(&key);
    }
}

pub(crate) fn axpy(ring: Ring, y: &mut Chain, a: &Elem, x: &Chain) {
    for (k, v) in x {
        add_term(ring, y, *k, &ring.mul(a, v));
    }
}

/// Generators with ℤ/8 degrees and sparse d and U.
#[derive(Clone, Debug, Default)]
struct Sparse {
    gens: Vec<(TowerKey, i64)>,
    d: HashMap<TowerKey, Chain>,
    u: HashMap<TowerKey, Chain>,
}

impl Sparse {
    fn apply(ring: Ring, map: &HashMap<TowerKey, Chain>, x: &Chain) -> Chain {
        let mut out = Chain::new();
        for (k, c) in x {
            if let Some(img) = map.get(k) {
                axpy(ring, &mut out, c, img);
            }
        }
        out
    }
}

fn grouped_terms(datum: &DonaldsonDatum) -> HashMap<DciGen, Vec<(DciGen, Elem)>> {
    let mut out: HashMap<DciGen, Vec<(DciGen, Elem)>> = HashMap::new();
    for (s, t, v) in dci_terms(datum) {
        out.entry(s).or_default().push((t, v));
    }
    out
}

fn shift_of(g: DciGen) -> Option<DciGen> {
    (g.summand == Summand::Irr).then_some(DciGen::new(Summand::IrrShift, g.orbit))
}

/// DCI ⊗ R⟦U*⟧ truncated at (U*)^k:
/// d(x U*ⁿ) = (-1)ⁿ (dx) U*ⁿ + (-1)^|x| (ux) U*ⁿ⁻¹ and
/// U(x U*ⁿ) = (-1)^{|x|+n-1} x U*ⁿ⁻¹.
fn raw_plus(datum: &DonaldsonDatum, k: i64) -> Sparse {
    let ring = datum.ring();
    let terms = grouped_terms(datum);
    let mut s = Sparse::default();
    for g in dci_generators(datum) {
        let odd = g.is_odd(datum);
        for n in 0..=k {
            let key = (g, n);
            s.gens.push((key, (g.degree(datum) + 4 * n).rem_euclid(PERIOD)));
            let mut d = Chain::new();
            let sn = ring.sign(n % 2 == 1);
            for (t, v) in terms.get(&g).into_iter().flatten() {
                add_term(ring, &mut d, (*t, n), &ring.mul(&sn, v));
            }
            if n >= 1 {
                if let Some(t) = shift_of(g) {
                    add_term(ring, &mut d, (t, n - 1), &ring.sign(odd));
                }
                let mut u = Chain::new();
                add_term(ring, &mut u, (g, n - 1), &ring.sign(odd ^ ((n - 1) % 2 == 1)));
                s.u.insert(key, u);
            }
            s.d.insert(key, d);
        }
    }
    s
}

/// DCI ⊗ R[U] with powers in `lo..=hi` (a quotient of the Laurent tower):
/// d(x Uⁿ) = (dx) Uⁿ + (-1)ⁿ (ux) Uⁿ⁺¹ and U(x Uⁿ) = (-1)ⁿ x Uⁿ⁺¹.
fn raw_minus(datum: &DonaldsonDatum, lo: i64, hi: i64) -> Sparse {
    let ring = datum.ring();
    let terms = grouped_terms(datum);
    let mut s = Sparse::default();
    for g in dci_generators(datum) {
        for n in lo..=hi {
            let key = (g, n);
            s.gens.push((key, (g.degree(datum) - 4 * n).rem_euclid(PERIOD)));
            let sn = ring.sign(n.rem_euclid(2) == 1);
            let mut d = Chain::new();
            for (t, v) in terms.get(&g).into_iter().flatten() {
                add_term(ring, &mut d, (*t, n), v);
            }
            if n < hi {
                if let Some(t) = shift_of(g) {
                    add_term(ring, &mut d, (t, n + 1), &sn);
                }
                let mut u = Chain::new();
                add_term(ring, &mut u, (g, n + 1), &sn);
                s.u.insert(key, u);
            }
            s.d.insert(key, d);
        }
    }
    s
}

/// A ℤ/8-graded tower complex with its degree -4 U-map.
#[derive(Clone, Debug)]
pub struct TowerComplex {
    pub flavor: Flavor,
    pub reduced: bool,
    pub truncation: usize,
    pub keyed: KeyedComplex<TowerKey>,
    u: HashMap<TowerKey, Chain>,
}

impl TowerComplex {
    fn build(flavor: Flavor, reduced: bool, truncation: usize, ring: Ring, s: Sparse) -> Result<Self, ComplexError> {
        let mut b = ComplexBuilder::cyclic(ring, PERIOD);
        for (key, deg) in &s.gens {
            b.add_generator(*key, *deg)?;
        }
        for (key, _) in &s.gens {
            for (t, c) in s.d.get(key).into_iter().flatten() {
                b.add_entry(key, t, c.clone())?;
            }
        }
        Ok(TowerComplex { flavor, reduced, truncation, keyed: b.build()?, u: s.u })
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.keyed.complex
    }

    /// U applied to one generator.
    pub fn u_terms(&self, key: &TowerKey) -> Vec<(TowerKey, Elem)> {
        self.u.get(key).map(|c| c.iter().map(|(k, v)| (*k, v.clone())).collect()).unwrap_or_default()
    }

    fn u_block(&self, k: i64) -> ExactMatrix {
        let c = self.complex();
        let cols: Vec<Vec<Elem>> = self
            .keyed
            .keys(k)
            .iter()
            .map(|key| self.keyed.vector(k - 4, &self.u_terms(key)).expect("U lowers degree by 4"))
            .collect();
        ExactMatrix::from_columns(c.ring(), c.rank(k - 4), &cols)
    }

    /// The U-action as a degree -4 map. On the unreduced towers it is a
    /// chain map; on the truncated reduced models it commutes with d only
    /// away from the top tower power (see [`TowerComplex::u_defects`]).
    pub fn u_map(&self) -> ChainMap {
        let c = self.complex();
        ChainMap::new_unchecked(c, c, -4, |k| self.u_block(k)).expect("U blocks have the right shape")
    }

    /// Nonzero entries (source, target, value) of dU - Ud.
    pub fn u_defects(&self) -> Vec<(TowerKey, TowerKey, Elem)> {
        let c = self.complex();
        let mut out = Vec::new();
        for k in c.degrees() {
            let lhs = c.diff(k - 4).mul(&self.u_block(k));
            let rhs = self.u_block(k - 1).mul(&c.diff(k));
            for (i, j, v) in lhs.sub(&rhs).triplets() {
                out.push((self.keyed.keys(k)[j], self.keyed.keys(k - 5)[i], v));
            }
        }
        out
    }

    /// Readable name of a generator, e.g. `alpha[3]·U^2`.
    pub fn label(&self, datum: &DonaldsonDatum, key: &TowerKey) -> String {
        let base = key.0.label(datum);
        match (self.flavor, key.1) {
            (Flavor::Tilde, _) | (_, 0) => base,
            (Flavor::Plus, n) => format!("{}·U*^{}", base, n),
            (_, n) => format!("{}·U^{}", base, n),
        }
    }
}

/// DCI itself as a tower with only the zeroth power.
pub(crate) fn tilde_tower(datum: &DonaldsonDatum) -> Result<TowerComplex, DonaldsonError> {
    require_valid(datum)?;
    let mut s = Sparse::default();
    for g in dci_generators(datum) {
        s.gens.push(((g, 0), g.degree(datum)));
    }
    for (src, t, v) in dci_terms(datum) {
        s.d.entry((src, 0)).or_default().insert((t, 0), v);
    }
    Ok(TowerComplex::build(Flavor::Tilde, false, 0, datum.ring(), s)?)
}

fn check_truncation(k: usize) -> Result<(), DonaldsonError> {
    if k < 1 {
        return Err(DonaldsonError::TruncationTooSmall { order: k, needed: 1 });
    }
    Ok(())
}

pub fn build_dci_plus(datum: &DonaldsonDatum, k: usize) -> Result<TowerComplex, DonaldsonError> {
    require_valid(datum)?;
    check_truncation(k)?;
    Ok(TowerComplex::build(Flavor::Plus, false, k, datum.ring(), raw_plus(datum, k as i64))?)
}

pub fn build_dci_minus(datum: &DonaldsonDatum, k: usize) -> Result<TowerComplex, DonaldsonError> {
    require_valid(datum)?;
    check_truncation(k)?;
    Ok(TowerComplex::build(Flavor::Minus, false, k, datum.ring(), raw_minus(datum, 0, k as i64))?)
}

/// DCI ⊗ R[U, U⁻¹] with powers in [-k, k]: a subquotient of the completed
/// Laurent tower, which models the Tate flavor.
pub fn build_dci_tate(datum: &DonaldsonDatum, k: usize) -> Result<TowerComplex, DonaldsonError> {
    require_valid(datum)?;
    check_truncation(k)?;
    Ok(TowerComplex::build(Flavor::Tate, false, k, datum.ring(), raw_minus(datum, -(k as i64), k as i64))?)
}

fn is_shift(key: &TowerKey) -> bool {
    key.0.summand == Summand::IrrShift
}

fn part(x: &Chain, keep: impl Fn(&TowerKey) -> bool) -> Chain {
    x.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, v.clone())).collect()
}

/// Solves A⁺y = c for y supported on irreducibles at powers 1..=limit, where
/// A⁺ is the C^irr[3]-component of d on those generators. Lowest powers
/// first; the result is the truncation of the power series P⁺c.
fn solve_plus(ring: Ring, raw: &Sparse, c: &Chain, limit: i64) -> Chain {
    let mut residual = part(c, is_shift);
    let mut y = Chain::new();
    for m in 0..limit {
        let level: Vec<(TowerKey, Elem)> =
            residual.iter().filter(|(k, _)| k.1 == m).map(|(k, v)| (*k, v.clone())).collect();
        for ((g, _), v) in level {
            let src = (DciGen::new(Summand::Irr, g.orbit), m + 1);
            let lead = raw.d[&src][&(g, m)].clone();
            let coef = ring.mul(&v, &ring.inv(&lead).expect("tower coefficient is a sign"));
            add_term(ring, &mut y, src, &coef);
            let img = part(&raw.d[&src], is_shift);
            axpy(ring, &mut residual, &ring.neg(&coef), &img);
        }
    }
    y
}

/// Solves A⁻y = c modulo U⁰ for y supported on irreducibles, where A⁻ is the
/// C^irr[3]-component of d. Highest powers first; c must have no U⁰ part.
fn solve_minus(ring: Ring, raw: &Sparse, c: &Chain) -> Chain {
    let mut residual = part(c, |k| is_shift(k) && k.1 >= 1);
    let mut y = Chain::new();
    while let Some((key, v)) = residual.iter().max_by_key(|(k, _)| (k.1, k.0)).map(|(k, v)| (*k, v.clone())) {
        let (g, m) = key;
        let src = (DciGen::new(Summand::Irr, g.orbit), m - 1);
        let lead = raw.d[&src][&key].clone();
        let coef = ring.mul(&v, &ring.inv(&lead).expect("tower coefficient is a sign"));
        add_term(ring, &mut y, src, &coef);
        let img = part(&raw.d[&src], |k| is_shift(k) && k.1 >= 1);
        axpy(ring, &mut residual, &ring.neg(&coef), &img);
        debug_assert!(!residual.contains_key(&key));
    }
    y
}

fn irr_orbits(datum: &DonaldsonDatum) -> Vec<usize> {
    datum.indices(super::Stab::Irr)
}

fn chain_to_column(ring: Ring, index: &HashMap<TowerKey, usize>, rows: usize, x: &Chain) -> Vec<Elem> {
    let mut v = vec![ring.zero(); rows];
    for (k, c) in x {
        if let Some(&i) = index.get(k) {
            v[i] = c.clone();
        }
    }
    v
}

fn block_index(irr: &[usize], summand: Summand, powers: impl Iterator<Item = i64>) -> (Vec<TowerKey>, HashMap<TowerKey, usize>) {
    let keys: Vec<TowerKey> =
        powers.flat_map(|n| irr.iter().map(move |&o| (DciGen::new(summand, o), n))).collect();
    let index = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    (keys, index)
}

/// U_Fl + U⁺_alg from C^irr ⊗ (U*)ⁿ, n = 1..=k, to C^irr[3] ⊗ (U*)^m,
/// m = 0..k, in blocks ordered by power then orbit.
pub fn alg_plus_operator(datum: &DonaldsonDatum, k: usize) -> Result<ExactMatrix, DonaldsonError> {
    require_valid(datum)?;
    let ring = datum.ring();
    let raw = raw_plus(datum, k as i64);
    let irr = irr_orbits(datum);
    let (cols, _) = block_index(&irr, Summand::Irr, 1..=k as i64);
    let (_, rows) = block_index(&irr, Summand::IrrShift, 0..k as i64);
    let columns: Vec<Vec<Elem>> =
        cols.iter().map(|key| chain_to_column(ring, &rows, rows.len(), &part(&raw.d[key], is_shift))).collect();
    Ok(ExactMatrix::from_columns(ring, rows.len(), &columns))
}

/// P⁺ = (U_Fl + U⁺_alg)⁻¹ on the same blocks, truncated at (U*)^k.
pub fn p_plus(datum: &DonaldsonDatum, k: usize) -> Result<ExactMatrix, DonaldsonError> {
    require_valid(datum)?;
    let ring = datum.ring();
    let raw = raw_plus(datum, k as i64);
    let irr = irr_orbits(datum);
    let (_, out) = block_index(&irr, Summand::Irr, 1..=k as i64);
    let (inputs, _) = block_index(&irr, Summand::IrrShift, 0..k as i64);
    let columns: Vec<Vec<Elem>> = inputs
        .iter()
        .map(|key| {
            let c: Chain = [(*key, ring.one())].into_iter().collect();
            chain_to_column(ring, &out, out.len(), &solve_plus(ring, &raw, &c, k as i64))
        })
        .collect();
    Ok(ExactMatrix::from_columns(ring, out.len(), &columns))
}

/// U_Fl + U⁻_alg modulo U⁰, from C^irr ⊗ Uⁿ, n = 0..k, to C^irr[3] ⊗ U^m,
/// m = 1..=k.
pub fn alg_minus_operator(datum: &DonaldsonDatum, k: usize) -> Result<ExactMatrix, DonaldsonError> {
    require_valid(datum)?;
    let ring = datum.ring();
    let raw = raw_minus(datum, 0, k as i64);
    let irr = irr_orbits(datum);
    let (cols, _) = block_index(&irr, Summand::Irr, 0..k as i64);
    let (_, rows) = block_index(&irr, Summand::IrrShift, 1..=k as i64);
    let columns: Vec<Vec<Elem>> = cols
        .iter()
        .map(|key| chain_to_column(ring, &rows, rows.len(), &part(&raw.d[key], |t| is_shift(t) && t.1 >= 1)))
        .collect();
    Ok(ExactMatrix::from_columns(ring, rows.len(), &columns))
}

/// P⁻ = (U_Fl + U⁻_alg)⁻¹ on the same blocks.
pub fn p_minus(datum: &DonaldsonDatum, k: usize) -> Result<ExactMatrix, DonaldsonError> {
    require_valid(datum)?;
    let ring = datum.ring();
    let raw = raw_minus(datum, 0, k as i64);
    let irr = irr_orbits(datum);
    let (_, out) = block_index(&irr, Summand::Irr, 0..k as i64);
    let (inputs, _) = block_index(&irr, Summand::IrrShift, 1..=k as i64);
    let columns: Vec<Vec<Elem>> = inputs
        .iter()
        .map(|key| {
            let c: Chain = [(*key, ring.one())].into_iter().collect();
            chain_to_column(ring, &out, out.len(), &solve_minus(ring, &raw, &c))
        })
        .collect();
    Ok(ExactMatrix::from_columns(ring, out.len(), &columns))
}

/// C^irr ⊕ (C^{U(1)} ⊕ C^{U(1)}[2] ⊕ C^θ)⟦U*⟧ truncated at (U*)^k. A
/// generator x is identified with Φx = x - P⁺(A-part of dx) in the kernel of
/// the projection to the C^irr[3] tower, and ∂̄ = π∂Φ, Ū = πUΦ with π the
/// projection back onto the reduced generators.
pub fn build_reduced_plus(datum: &DonaldsonDatum, k: usize) -> Result<TowerComplex, DonaldsonError> {
    require_valid(datum)?;
    check_truncation(k)?;
    let ring = datum.ring();
    let k = k as i64;
    let raw = raw_plus(datum, k + 1);
    let keep = |key: &TowerKey| match key.0.summand {
        Summand::Irr => key.1 == 0,
        Summand::IrrShift => false,
        _ => key.1 <= k,
    };
    let mut s = Sparse::default();
    for (key, deg) in raw.gens.iter().filter(|(key, _)| keep(key)) {
        let mut phi: Chain = [(*key, ring.one())].into_iter().collect();
        let corr = solve_plus(ring, &raw, &part(&raw.d[key], is_shift), k + 1);
        axpy(ring, &mut phi, &ring.from_i64(-1), &corr);
        s.gens.push((*key, *deg));
        s.d.insert(*key, part(&Sparse::apply(ring, &raw.d, &phi), keep));
        s.u.insert(*key, part(&Sparse::apply(ring, &raw.u, &phi), keep));
    }
    Ok(TowerComplex::build(Flavor::Plus, true, k as usize, ring, s)?)
}

/// C^irr[3] ⊕ (C^{U(1)} ⊕ C^{U(1)}[2] ⊕ C^θ)[U] truncated at U^k, as the
/// quotient of DCI⁻ by the acyclic subcomplex spanned by C^irr[U] and its
/// boundaries: z ↦ z - d P⁻(A-part of z), then projected.
pub fn build_reduced_minus(datum: &DonaldsonDatum, k: usize) -> Result<TowerComplex, DonaldsonError> {
    require_valid(datum)?;
    check_truncation(k)?;
    let ring = datum.ring();
    let k = k as i64;
    let raw = raw_minus(datum, 0, k + 1);
    let keep = |key: &TowerKey| match key.0.summand {
        Summand::IrrShift => key.1 == 0,
        Summand::Irr => false,
        _ => key.1 <= k,
    };
    let psi = |z: Chain| -> Chain {
        let w = solve_minus(ring, &raw, &part(&z, |t| is_shift(t) && t.1 >= 1));
        let mut r = z;
        axpy(ring, &mut r, &ring.from_i64(-1), &Sparse::apply(ring, &raw.d, &w));
        part(&r, keep)
    };
    let mut s = Sparse::default();
    for (key, deg) in raw.gens.iter().filter(|(key, _)| keep(key)) {
        let one: Chain = [(*key, ring.one())].into_iter().collect();
        s.gens.push((*key, *deg));
        s.d.insert(*key, psi(Sparse::apply(ring, &raw.d, &one)));
        s.u.insert(*key, psi(Sparse::apply(ring, &raw.u, &one)));
    }
    Ok(TowerComplex::build(Flavor::Minus, true, k as usize, ring, s)?)
}
