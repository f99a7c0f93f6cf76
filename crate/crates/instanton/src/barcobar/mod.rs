//! Two-sided bar and cobar constructions, the dualizing complex, the norm
//! map and the Tate complex, with degree-window truncations.
//!
//! Bar words m[a₁|…|a_k]n have degree |m| + Σ(|aᵢ|+1) + |n|, letters taken
//! from the non-unit basis of the algebra. Cobar generators are functionals
//! sending one word n[a₁|…|a_p] of B(N,A,A) (trailing slot 1) to one basis
//! element x of M, of degree |x| - |n[a₁|…|a_p]|.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::dgalgebra::{trivial_module, DgAlgebra, DgError, DgModule, Gen, Side};
use crate::exactlinalg::{Elem, ExactMatrix, Ring};
use crate::gradedcomplex::{les_defects, ChainMap, ComplexBuilder, ComplexError, GradedComplex, KeyedComplex};

#[cfg(test)]
mod tests;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BarError {
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("incompatible truncations: {0}")]
    IncompatibleTruncation(String),
    #[error("module acts from the wrong side: {0}")]
    WrongSide(String),
    #[error("modules must be integer graded and over the same algebra")]
    Unsupported,
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A bar word m[a₁|…|a_k]n, or the cobar functional n[a₁|…|a_p] ↦ right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub left: Gen,
    pub letters: Vec<Gen>,
    pub right: Gen,
}

/// Degree window of the generated complex, plus an optional cap on the
/// number of letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub lo: i64,
    pub hi: i64,
    pub max_length: Option<usize>,
}

impl Truncation {
    pub fn window(lo: i64, hi: i64) -> Self {
        Truncation { lo, hi, max_length: None }
    }
}

/// A generated bar or cobar complex with its named basis.
#[derive(Clone, Debug)]
pub struct WordComplex {
    pub keyed: KeyedComplex<Word>,
    pub truncation: Truncation,
}

impl WordComplex {
    pub fn complex(&self) -> &GradedComplex {
        &self.keyed.complex
    }

    /// Coordinate vector of a single generator.
    pub fn basis_vector(&self, w: &Word) -> Option<(i64, Vec<Elem>)> {
        let (k, i) = self.keyed.position(w)?;
        let ring = self.complex().ring();
        let mut v = vec![ring.zero(); self.complex().rank(k)];
        v[i] = ring.one();
        Some((k, v))
    }
}

fn shifted(a: Gen) -> i64 {
    a.0 + 1
}

fn letters_degree(w: &[Gen]) -> i64 {
    w.iter().map(|&a| shifted(a)).sum()
}

fn sign(ring: Ring, k: i64) -> Elem {
    ring.sign(k.rem_euclid(2) == 1)
}

fn nonzero(v: &[Elem]) -> impl Iterator<Item = (usize, &Elem)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero())
}

/// Lowest and highest degrees carrying generators.
fn support(m: &DgModule) -> Result<(i64, i64), BarError> {
    if m.complex().grading().is_cyclic() {
        return Err(BarError::Unsupported);
    }
    let degs: Vec<i64> = m.complex().degrees().into_iter().filter(|&k| m.rank(k) > 0).collect();
    Ok((*degs.first().unwrap_or(&0), *degs.last().unwrap_or(&0)))
}

fn min_letter(a: &DgAlgebra) -> i64 {
    a.ideal_basis().into_iter().map(shifted).min().unwrap_or(1)
}

/// Letter sequences of total shifted degree at most `budget`.
fn words(letters: &[Gen], budget: i64, max_length: Option<usize>) -> Vec<Vec<Gen>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![(vec![], 0i64)];
    while let Some((w, deg)) = frontier.pop() {
        if max_length.is_some_and(|k| w.len() >= k) {
            continue;
        }
        for &a in letters {
            let d = deg + shifted(a);
            if d <= budget {
                let mut w2: Vec<Gen> = w.clone();
                w2.push(a);
                out.push(w2.clone());
                frontier.push((w2, d));
            }
        }
    }
    out.sort();
    out
}

/// The module R over A, acting through the augmentation.
pub fn ground_module(a: &Arc<DgAlgebra>, side: Side) -> DgModule {
    trivial_module(&GradedComplex::unit(a.ring(), 0), a.clone(), side).expect("trivial module is valid")
}

fn same_algebra(a: &DgAlgebra, m: &DgModule) -> Result<(), BarError> {
    if m.algebra().as_ref() != a {
        return Err(BarError::Unsupported);
    }
    Ok(())
}

/// Terms of the bar differential of m[a₁|…|a_k]n:
///
/// (-1)^k ( dm[…]n + Σ (-1)^{|m|+e_{i-1}} m[…|daᵢ|…]n + (-1)^{|m|+e_k} m[…]dn )
///   + ma₁[a₂|…]n + Σ (-1)^i m[…|aᵢaᵢ₊₁|…]n + (-1)^k m[…|a_{k-1}]a_k n
///
/// with e_i = |a₁| + … + |aᵢ| in unshifted degrees, so that the first line
/// is the tensor differential of M ⊗ Ā^{⊗k} ⊗ N and the second line its
/// alternating face sum. Counting the bar shifts in e_i breaks d² = 0 as
/// soon as A or N has a nonzero differential. Products aᵢaᵢ₊₁ and daᵢ are
/// read in the augmentation ideal.
fn bar_terms(m: &DgModule, a: &DgAlgebra, n: &DgModule, w: &Word) -> Vec<(Word, Elem)> {
    let ring = a.ring();
    let k = w.letters.len() as i64;
    let sk = sign(ring, k);
    let unit = a.unit();
    let mut out = Vec::new();
    let mdeg = w.left.0;
    for (j, c) in nonzero(&m.complex().diff(mdeg).column(w.left.1)) {
        out.push((Word { left: (mdeg - 1, j), ..w.clone() }, ring.mul(&sk, c)));
    }
    let mut eps = 0i64;
    for (i, &ai) in w.letters.iter().enumerate() {
        let s = ring.mul(&sk, &sign(ring, mdeg + eps));
        for (j, c) in nonzero(&a.d(ai)) {
            let b = (ai.0 - 1, j);
            if b != unit {
                let mut letters = w.letters.clone();
                letters[i] = b;
                out.push((Word { letters, ..w.clone() }, ring.mul(&s, c)));
            }
        }
        eps += ai.0;
    }
    let ndeg = w.right.0;
    let s = ring.mul(&sk, &sign(ring, mdeg + eps));
    for (j, c) in nonzero(&n.complex().diff(ndeg).column(w.right.1)) {
        out.push((Word { right: (ndeg - 1, j), ..w.clone() }, ring.mul(&s, c)));
    }
    if let Some(&a1) = w.letters.first() {
        for (j, c) in nonzero(&m.act(w.left, a1)) {
            out.push((Word { left: (mdeg + a1.0, j), letters: w.letters[1..].to_vec(), right: w.right }, c.clone()));
        }
    }
    for i in 0..w.letters.len().saturating_sub(1) {
        let (x, y) = (w.letters[i], w.letters[i + 1]);
        let s = sign(ring, i as i64 + 1);
        for (j, c) in nonzero(&a.mul(x, y)) {
            let b = (x.0 + y.0, j);
            if b != unit {
                let mut letters = w.letters[..i].to_vec();
                letters.push(b);
                letters.extend_from_slice(&w.letters[i + 2..]);
                out.push((Word { letters, ..w.clone() }, ring.mul(&s, c)));
            }
        }
    }
    if let Some(&ak) = w.letters.last() {
        for (j, c) in nonzero(&n.act(w.right, ak)) {
            let letters = w.letters[..w.letters.len() - 1].to_vec();
            out.push((Word { left: w.left, letters, right: (ndeg + ak.0, j) }, ring.mul(&sk, c)));
        }
    }
    out
}

fn build(
    ring: Ring,
    t: Truncation,
    gens: Vec<(Word, i64)>,
    terms: impl Fn(&Word, i64) -> Vec<(Word, Elem)>,
) -> Result<KeyedComplex<Word>, BarError> {
    let mut b = ComplexBuilder::integer(ring).window(t.lo, t.hi);
    for (w, d) in &gens {
        b.add_generator(w.clone(), *d)?;
    }
    for (w, d) in &gens {
        for (target, c) in terms(w, *d) {
            if b.contains(&target) {
                b.add_entry(w, &target, c)?;
            }
        }
    }
    Ok(b.build()?)
}

fn finish(keyed: KeyedComplex<Word>, t: Truncation, lo: i64, hi: i64) -> Result<WordComplex, BarError> {
    if lo > hi {
        return Err(BarError::TruncationTooSmall(format!(
            "window [{}, {}] leaves no degree with exact homology",
            t.lo, t.hi
        )));
    }
    let mut keyed = keyed;
    keyed.complex = keyed.complex.with_valid_range(lo, hi);
    Ok(WordComplex { keyed, truncation: t })
}

/// B(M, A, N) for a right module M and a left module N, both integer
/// graded and bounded. Every word whose degree lies in the window is a
/// generator (subject to the length cap). Homology is exact on
/// [lo+1, hi-1], further limited by the length cap.
pub fn bar(m: &DgModule, a: &DgAlgebra, n: &DgModule, t: Truncation) -> Result<WordComplex, BarError> {
    if m.side() != Side::Right || n.side() != Side::Left {
        return Err(BarError::WrongSide("bar needs a right module on the left and a left module on the right".into()));
    }
    same_algebra(a, m)?;
    same_algebra(a, n)?;
    let (bm, _) = support(m)?;
    let (bn, _) = support(n)?;
    let mut gens = Vec::new();
    for letters in words(&a.ideal_basis(), t.hi - bm - bn, t.max_length) {
        let ld = letters_degree(&letters);
        for &x in &m.basis() {
            for &y in &n.basis() {
                let d = x.0 + ld + y.0;
                if (t.lo..=t.hi).contains(&d) {
                    gens.push((Word { left: x, letters: letters.clone(), right: y }, d));
                }
            }
        }
    }
    let keyed = build(a.ring(), t, gens, |w, _| bar_terms(m, a, n, w))?;
    // nothing lives below |m| + |n|, so the bottom of the window is exact there
    let lo = if t.lo <= bm + bn { t.lo } else { t.lo + 1 };
    let mut hi = t.hi - 1;
    if let Some(k) = t.max_length {
        hi = hi.min((k as i64 + 1) * min_letter(a) + bm + bn - 2);
    }
    finish(keyed, t, lo, hi)
}

/// cB(N, A, M) = Hom_A(B(N, A, A), M), finitely supported, for right
/// modules N and M. The differential of η is
///
/// (dη)(n[a₁|…|a_p]) = d_M η(n[…]) - (-1)^{|η|} η(d_B n[…]) - (-1)^{|η|+p} η(n[a₁|…|a_{p-1}]) a_p
///
/// where d_B omits the term moving a_p into the trailing slot. A length cap
/// L gives the quotient by functionals on longer words; homology is then
/// exact only above the degrees of the discarded generators.
pub fn cobar(n: &DgModule, a: &DgAlgebra, m: &DgModule, t: Truncation) -> Result<WordComplex, BarError> {
    if m.side() != Side::Right || n.side() != Side::Right {
        return Err(BarError::WrongSide("cobar needs right modules".into()));
    }
    same_algebra(a, m)?;
    same_algebra(a, n)?;
    let ring = a.ring();
    let (bn, _) = support(n)?;
    let (_, tm) = support(m)?;
    let unit_r = ground_module(m.algebra(), Side::Left);
    let letters = a.ideal_basis();
    let all_words = words(&letters, tm - t.lo - bn, t.max_length);
    let mut gens = Vec::new();
    let mut sources = Vec::new();
    for w in &all_words {
        let ld = letters_degree(w);
        for &y in &n.basis() {
            sources.push(Word { left: y, letters: w.clone(), right: (0, 0) });
            for &x in &m.basis() {
                let d = x.0 - y.0 - ld;
                if (t.lo..=t.hi).contains(&d) {
                    gens.push((Word { left: y, letters: w.clone(), right: x }, d));
                }
            }
        }
    }
    // preimages under d_B: w ↦ [(w', c)] with w appearing in d_B w' with coefficient c
    let mut pre: HashMap<(Gen, Vec<Gen>), Vec<(Word, Elem)>> = HashMap::new();
    for w2 in &sources {
        for (w, c) in bar_terms(n, a, &unit_r, w2) {
            pre.entry((w.left, w.letters)).or_default().push((w2.clone(), c));
        }
    }
    let keyed = build(ring, t, gens, |g, d| {
        let mut out = Vec::new();
        let x = g.right;
        for (j, c) in nonzero(&m.complex().diff(x.0).column(x.1)) {
            out.push((Word { right: (x.0 - 1, j), ..g.clone() }, c.clone()));
        }
        let s = ring.neg(&sign(ring, d));
        for (w2, c) in pre.get(&(g.left, g.letters.clone())).into_iter().flatten() {
            out.push((Word { left: w2.left, letters: w2.letters.clone(), right: x }, ring.mul(&s, c)));
        }
        if t.max_length.map_or(true, |k| g.letters.len() < k) {
            let s = ring.neg(&sign(ring, d + g.letters.len() as i64 + 1));
            for &b in &letters {
                let mut w2 = g.letters.clone();
                w2.push(b);
                for (j, c) in nonzero(&m.act(x, b)) {
                    out.push((Word { left: g.left, letters: w2.clone(), right: (x.0 + b.0, j) }, ring.mul(&s, c)));
                }
            }
        }
        out
    })?;
    let mut lo = t.lo + 1;
    if let Some(k) = t.max_length {
        lo = lo.max(tm - (k as i64 + 1) * min_letter(a) - bn + 2);
    }
    let hi = if t.hi >= tm - bn { t.hi } else { t.hi - 1 };
    finish(keyed, t, lo, hi)
}

/// Borel complex C⁺_A(M) = B(M, A, R).
pub fn borel(m: &DgModule, t: Truncation) -> Result<WordComplex, BarError> {
    let a = m.algebra().clone();
    bar(m, &a, &ground_module(&a, Side::Left), t)
}

/// coBorel complex C⁻_A(M) = cB(R, A, M).
pub fn coborel(m: &DgModule, t: Truncation) -> Result<WordComplex, BarError> {
    let a = m.algebra().clone();
    cobar(&ground_module(&a, Side::Right), &a, m, t)
}

/// The dualizing complex D_A = cB(R, A, A) on functionals supported on
/// words of length at most `max_length` (a quotient dg-module), with A
/// acting on the left through the values.
pub struct DualizingComplex {
    pub cobar: WordComplex,
    pub module: DgModule,
}

pub fn dualizing_complex(a: &Arc<DgAlgebra>, max_length: usize) -> Result<DualizingComplex, BarError> {
    let top = a.top_degree();
    let lo = -(max_length as i64) * (top + 1);
    let t = Truncation { lo, hi: top, max_length: Some(max_length) };
    let regular = crate::dgalgebra::regular_module(a.clone(), Side::Right)?;
    let cb = cobar(&ground_module(a, Side::Right), a, &regular, t)?;
    let ring = a.ring();
    let mut actions = HashMap::new();
    for k in cb.complex().degrees() {
        for (i, g) in cb.keyed.keys(k).iter().enumerate() {
            for b in a.ideal_basis() {
                let v = a.mul(b, g.right);
                let target = k + b.0;
                let mut out = vec![ring.zero(); cb.complex().rank(target)];
                for (j, c) in nonzero(&v) {
                    let key = Word { right: (g.right.0 + b.0, j), ..g.clone() };
                    if let Some((_, p)) = cb.keyed.position(&key) {
                        out[p] = ring.add(&out[p], c);
                    }
                }
                actions.insert(((k, i), b), out);
            }
        }
    }
    let module = DgModule::new(cb.complex().clone(), a.clone(), Side::Left, actions)?;
    Ok(DualizingComplex { cobar: cb, module })
}

/// B(M, A, D_A) with bar words of length ≤ K and D_A cut at length 2K.
/// Homology agrees with H⁺_A(M) shifted by the top degree of A on the
/// reported valid range.
///
/// Both cuts leave spurious classes. Cutting D_A at length L leaves a free
/// summand near degree -L(t+1) (t the top degree of A) whose bar
/// construction reaches up to -(L-K)(t+1) + |M|_max; cutting the bar words
/// at K leaves cycles starting near K·ℓ above the bottom of M ⊗ D_A, with
/// ℓ the least shifted letter degree. With L = 2K both ends move out
/// linearly in K.
pub struct TwistedBorel {
    pub bar: WordComplex,
    pub dualizing: DualizingComplex,
    pub length: usize,
}

pub fn twisted_borel(m: &DgModule, length: usize) -> Result<TwistedBorel, BarError> {
    let a = m.algebra().clone();
    let dualizing = dualizing_complex(&a, 2 * length)?;
    let (bm, tm) = support(m)?;
    let top = a.top_degree();
    let (dlo, _) = support(&dualizing.module)?;
    let t = Truncation { lo: bm + dlo, hi: tm + top + length as i64 * (top + 1), max_length: Some(length) };
    let mut b = bar(m, &a, &dualizing.module, t)?;
    let ell = min_letter(&a);
    let span = (tm - bm + ell - 1) / ell;
    let hi = bm + top + (length as i64 - span) * ell - 1;
    let lo = tm + 1 - length as i64 * (top + 1);
    if hi < lo.max(bm + top) {
        return Err(BarError::TruncationTooSmall(format!("length {} is too short for this module", length)));
    }
    // replaces the generic bar estimate, which assumes no junk inside N
    b.keyed.complex = b.keyed.complex.replace_valid_range(lo, hi);
    Ok(TwistedBorel { bar: b, dualizing, length })
}

/// The norm map B(M, A, D_A) → cB(R, A, M): words with letters go to 0 and
/// m⊗ψ goes to the functional w ↦ m·ψ(w).
pub struct NormMap {
    pub source: TwistedBorel,
    pub target: WordComplex,
    pub map: ChainMap,
}

pub fn norm_map(m: &DgModule, length: usize) -> Result<NormMap, BarError> {
    let source = twisted_borel(m, length)?;
    let t = source.bar.truncation;
    let target = coborel(m, Truncation { lo: t.lo, hi: t.hi, max_length: Some(2 * length) })?;
    norm_between(m, source, target)
}

fn norm_between(m: &DgModule, source: TwistedBorel, target: WordComplex) -> Result<NormMap, BarError> {
    if target.truncation.max_length != source.dualizing.cobar.truncation.max_length {
        return Err(BarError::IncompatibleTruncation("the coBorel side must be cut at the dualizing length".into()));
    }
    let ring = m.ring();
    let src = source.bar.complex().clone();
    let tgt = target.complex().clone();
    let dkeys = &source.dualizing.cobar.keyed;
    let map = ChainMap::new_unchecked(&src, &tgt, 0, |k| {
        let mut mat = ExactMatrix::zeros(ring, tgt.rank(k), src.rank(k));
        for (i, w) in source.bar.keyed.keys(k).iter().enumerate() {
            if !w.letters.is_empty() {
                continue;
            }
            let psi = &dkeys.keys(w.right.0)[w.right.1];
            for (j, c) in nonzero(&m.act(w.left, psi.right)) {
                let key = Word { left: psi.left, letters: psi.letters.clone(), right: (w.left.0 + psi.right.0, j) };
                if let Some((kk, p)) = target.keyed.position(&key) {
                    debug_assert_eq!(kk, k);
                    let cur = mat.get(p, i).clone();
                    mat.set(p, i, ring.add(&cur, c));
                }
            }
        }
        mat
    })?;
    let lo = src.window().map_or(0, |w| w.0) + 1;
    let hi = src.window().map_or(0, |w| w.1);
    map.check(&(lo..=hi).collect::<Vec<_>>())?;
    Ok(NormMap { source, target, map })
}

/// Tate complex: the cone of the norm map.
pub struct TateComplex {
    pub norm: NormMap,
    pub cone: GradedComplex,
}

pub fn tate_complex(m: &DgModule, length: usize) -> Result<TateComplex, BarError> {
    let norm = norm_map(m, length)?;
    let cone = GradedComplex::cone(&norm.map)?;
    Ok(TateComplex { norm, cone })
}

/// An element of cB(R, A, R): a homogeneous functional on bar words of A,
/// listed as (word, value).
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub terms: Vec<(Vec<Gen>, Elem)>,
}

impl Cochain {
    pub fn single(letters: Vec<Gen>, value: Elem) -> Self {
        Cochain { terms: vec![(letters, value)] }
    }

    /// Degree -Σ(|aᵢ|+1); None if empty or inhomogeneous.
    pub fn degree(&self) -> Option<i64> {
        let degs: BTreeSet<i64> = self.terms.iter().map(|(w, _)| -letters_degree(w)).collect();
        (degs.len() == 1).then(|| *degs.iter().next().unwrap())
    }
}

/// Sign of contracting the last r letters of m[a₁|…|a_k] against a
/// cochain of degree e: (-1)^{(|m| + h)·t + e(k-r)}, with h and t the
/// unshifted degrees of the first k-r and last r letters. This is the sign
/// making contraction by a cocycle a chain map for the bar differential
/// above; the coaction sign (-1)^{(k-i)(|m|+ε_i)} is not.
fn contraction_sign(ring: Ring, mdeg: i64, letters: &[Gen], i: usize, e: i64) -> Elem {
    let head: i64 = letters[..i].iter().map(|a| a.0).sum();
    let tail: i64 = letters[i..].iter().map(|a| a.0).sum();
    sign(ring, (mdeg + head) * tail + e * i as i64)
}

/// Sign of the cup product β·η on the generator η: n[c₁|…|c_p] ↦ x, for
/// β on words of length r and degree e: (-1)^{rp + e(|c₁|+…+|c_p| + |x|)}
/// with unshifted letter degrees.
fn cup_sign(ring: Ring, r: usize, w: &Word, e: i64) -> Elem {
    let body: i64 = w.letters.iter().map(|a| a.0).sum();
    sign(ring, (r * w.letters.len()) as i64 + e * (body + w.right.0))
}

/// Which complex a cochain acts on.
pub enum ActionTarget<'a> {
    /// B(M, A, R), by contraction of trailing letters.
    Borel(&'a WordComplex),
    /// cB(R, A, M), by cup product on leading letters.
    CoBorel(&'a WordComplex),
    /// The Tate cone, diagonally (through D_A on the twisted side).
    Tate(&'a TateComplex),
}

/// Left action of β ∈ cB(R, A, R) as a chain map of degree |β|.
pub fn minus_action(beta: &Cochain, target: ActionTarget<'_>) -> Result<ChainMap, BarError> {
    let e = beta.degree().ok_or_else(|| BarError::IncompatibleTruncation("cochain must be homogeneous".into()))?;
    match target {
        ActionTarget::Borel(c) => word_map(c, c, e, |w| contract(beta, w, c.complex().ring())),
        ActionTarget::CoBorel(c) => word_map(c, c, e, |w| cup(beta, w, c.complex().ring())),
        ActionTarget::Tate(t) => {
            let ring = t.cone.ring();
            let b = &t.norm.source.bar;
            let dk = &t.norm.source.dualizing.cobar.keyed;
            let twisted = word_map(b, b, e, |w| {
                let psi = &dk.keys(w.right.0)[w.right.1];
                let s = sign(ring, e * (w.left.0 + letters_degree(&w.letters)));
                cup(beta, psi, ring)
                    .into_iter()
                    .filter_map(|(p2, c)| {
                        let (k, i) = dk.position(&p2)?;
                        Some((Word { right: (k, i), ..w.clone() }, ring.mul(&s, &c)))
                    })
                    .collect()
            })?;
            let minus = word_map(&t.norm.target, &t.norm.target, e, |w| cup(beta, w, ring))?;
            let s = sign(ring, e);
            let cone = &t.cone;
            let map = ChainMap::new_unchecked(cone, cone, e, |k| {
                let (rb, rc) = (b.complex().rank(k - 1), t.norm.target.complex().rank(k));
                let (rb2, rc2) = (b.complex().rank(k - 1 + e), t.norm.target.complex().rank(k + e));
                let mut m = ExactMatrix::zeros(ring, rb2 + rc2, rb + rc);
                m.set_block(0, 0, &twisted.matrix(k - 1).scale(&s));
                m.set_block(rb2, rb, &minus.matrix(k));
                m
            })?;
            Ok(map)
        }
    }
}

fn contract(beta: &Cochain, w: &Word, ring: Ring) -> Vec<(Word, Elem)> {
    let mut out = Vec::new();
    for (b, c) in &beta.terms {
        if b.len() <= w.letters.len() && w.letters.ends_with(b) {
            let i = w.letters.len() - b.len();
            let s = contraction_sign(ring, w.left.0, &w.letters, i, -letters_degree(b));
            out.push((Word { letters: w.letters[..i].to_vec(), ..w.clone() }, ring.mul(&s, c)));
        }
    }
    out
}

fn cup(beta: &Cochain, w: &Word, ring: Ring) -> Vec<(Word, Elem)> {
    let mut out = Vec::new();
    for (b, c) in &beta.terms {
        let s = cup_sign(ring, b.len(), w, -letters_degree(b));
        let mut letters = b.clone();
        letters.extend_from_slice(&w.letters);
        out.push((Word { letters, ..w.clone() }, ring.mul(&s, c)));
    }
    out
}

/// A degree-e map between word complexes given on generators; images
/// outside the target window are dropped.
fn word_map(
    src: &WordComplex,
    tgt: &WordComplex,
    e: i64,
    f: impl Fn(&Word) -> Vec<(Word, Elem)>,
) -> Result<ChainMap, BarError> {
    let ring = src.complex().ring();
    Ok(ChainMap::new_unchecked(src.complex(), tgt.complex(), e, |k| {
        let mut m = ExactMatrix::zeros(ring, tgt.complex().rank(k + e), src.complex().rank(k));
        for (i, w) in src.keyed.keys(k).iter().enumerate() {
            for (w2, c) in f(w) {
                if let Some((k2, p)) = tgt.keyed.position(&w2) {
                    if k2 == k + e {
                        let cur = m.get(p, i).clone();
                        m.set(p, i, ring.add(&cur, &c));
                    }
                }
            }
        }
        m
    })?)
}

/// Degrees of a complex where a map's commutation can be trusted: both the
/// degree and its image degree keep all generators of the untruncated
/// object. Used by tests and callers of [`minus_action`].
pub fn interior_degrees(c: &GradedComplex, e: i64) -> Vec<i64> {
    let (lo, hi) = c.valid_range().or(c.window()).unwrap_or((0, -1));
    (lo..=hi).filter(|k| (lo..=hi).contains(&(k + e)) && (lo..=hi).contains(&(k - 1 + e))).collect()
}

/// Which slot of a word a module map acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Left,
    Right,
}

/// Map of word complexes induced by a degree-0 map of module complexes on
/// one slot: B(f, 1, 1) on the left slot, cB(1, 1, f) on the value slot.
pub fn slot_map(src: &WordComplex, tgt: &WordComplex, f: &ChainMap, slot: Slot) -> Result<ChainMap, BarError> {
    if f.degree() != 0 {
        return Err(BarError::Unsupported);
    }
    let ring = src.complex().ring();
    word_map(src, tgt, 0, |w| {
        let g = match slot {
            Slot::Left => w.left,
            Slot::Right => w.right,
        };
        let img = f.matrix(g.0).column(g.1);
        nonzero(&img)
            .map(|(j, c)| {
                let w2 = match slot {
                    Slot::Left => Word { left: (g.0, j), ..w.clone() },
                    Slot::Right => Word { right: (g.0, j), ..w.clone() },
                };
                (w2, ring.normalize(c.clone()))
            })
            .collect()
    })
}

/// Degrees k in [lo, hi] where the long exact sequence
/// H_k(B(M,A,D_A)) → H⁻_k → H^∞_k → H_{k-1}(B(M,A,D_A)) → … fails to be
/// exact at one of the three positions of degree k. Over a field.
pub fn tate_les_defects(t: &TateComplex, lo: i64, hi: i64) -> Result<Vec<i64>, BarError> {
    let b = t.norm.source.bar.complex();
    let c = t.norm.target.complex();
    let cone = &t.cone;
    let ring = cone.ring();
    let inc = ChainMap::new_unchecked(c, cone, 0, |k| {
        let mut m = ExactMatrix::zeros(ring, cone.rank(k), c.rank(k));
        m.set_block(b.rank(k - 1), 0, &ExactMatrix::identity(ring, c.rank(k)));
        m
    })?;
    let proj = ChainMap::new_unchecked(cone, b, -1, |k| {
        let mut m = ExactMatrix::zeros(ring, b.rank(k - 1), cone.rank(k));
        m.set_block(0, 0, &ExactMatrix::identity(ring, b.rank(k - 1)));
        m
    })?;
    let mut maps = Vec::new();
    let mut where_ = Vec::new();
    for k in (lo..=hi).rev() {
        maps.push(t.norm.map.induced(k)?);
        where_.push(k);
        maps.push(inc.induced(k)?);
        where_.push(k);
        maps.push(proj.induced(k)?);
        where_.push(k);
    }
    let mut out: Vec<i64> = les_defects(&maps).into_iter().map(|i| where_[i]).collect();
    out.dedup();
    Ok(out)
}
