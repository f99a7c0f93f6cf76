//! Donaldson-model complexes: the ℤ/8-graded dg-Λ(u₃)-module DCI assembled
//! from a finite datum of critical orbits and operator matrices, its Borel,
//! coBorel and Tate towers, the reduced models, and the four homology
//! flavors.

mod flavors;
mod towers;

#[cfg(test)]
mod tests;

pub use flavors::{
    compute, exact_triangle_defects, homology_euler_characteristic, index_spectral_sequence, tate_via_localization,
    truncation_for_window, unrolled_ranks, FlavorResult, GroupEntry, IndexSpectralSequence, Unrolled,
};
pub use towers::{
    alg_minus_operator, alg_plus_operator, build_dci_minus, build_dci_plus, build_dci_tate, build_reduced_minus,
    build_reduced_plus, p_minus, p_plus, Flavor, TowerComplex, TowerKey,
};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::dgalgebra::{exterior_algebra, DgError, DgModule, Side};
use crate::exactlinalg::{Elem, ExactMatrix, Ring};
use crate::gradedcomplex::{ComplexBuilder, ComplexError, KeyedComplex};
use crate::spectral::SpectralError;

/// Gradings live in ℤ/8.
pub const PERIOD: i64 = 8;

/// Stabilizer type of a critical orbit: SO(3) itself, S², or a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stab {
    Irr,
    So2,
    Full,
}

impl Stab {
    /// Dimension of the orbit.
    pub fn dimension(self) -> i64 {
        match self {
            Stab::Irr => 3,
            Stab::So2 => 2,
            Stab::Full => 0,
        }
    }

    /// Euler characteristic of the orbit.
    pub fn euler(self) -> i64 {
        match self {
            Stab::Irr => 0,
            Stab::So2 => 2,
            Stab::Full => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stab::Irr => "irr",
            Stab::So2 => "so2",
            Stab::Full => "full",
        }
    }

    pub fn from_name(s: &str) -> Option<Stab> {
        match s {
            "irr" => Some(Stab::Irr),
            "so2" => Some(Stab::So2),
            "full" => Some(Stab::Full),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub label: String,
    pub stab: Stab,
    /// Residue in 0..8.
    pub grading: i64,
}

impl OrbitRecord {
    pub fn new(label: impl Into<String>, stab: Stab, grading: i64) -> Self {
        OrbitRecord { label: label.into(), stab, grading }
    }
}

/// The eight operator families. Matrices are indexed (target, source) over
/// the orbits of the relevant stabilizer types, in datum order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// ∂₁
    Boundary,
    /// U_Fl
    UFloer,
    V1,
    V2,
    V3,
    V4,
    D1,
    D2,
}

impl Operator {
    pub const ALL: [Operator; 8] = [
        Operator::Boundary,
        Operator::UFloer,
        Operator::V1,
        Operator::V2,
        Operator::V3,
        Operator::V4,
        Operator::D1,
        Operator::D2,
    ];

    /// Name used in datum documents.
    pub fn name(self) -> &'static str {
        match self {
            Operator::Boundary => "d1",
            Operator::UFloer => "u_fl",
            Operator::V1 => "v1",
            Operator::V2 => "v2",
            Operator::V3 => "v3",
            Operator::V4 => "v4",
            Operator::D1 => "d_1",
            Operator::D2 => "d_2",
        }
    }

    pub fn from_name(s: &str) -> Option<Operator> {
        Operator::ALL.into_iter().find(|o| o.name() == s)
    }

    pub fn source(self) -> Stab {
        match self {
            Operator::Boundary | Operator::UFloer | Operator::V1 | Operator::V3 | Operator::D1 => Stab::Irr,
            Operator::V2 | Operator::V4 => Stab::So2,
            Operator::D2 => Stab::Full,
        }
    }

    pub fn target(self) -> Stab {
        match self {
            Operator::Boundary | Operator::UFloer | Operator::V2 | Operator::V4 | Operator::D2 => Stab::Irr,
            Operator::V1 | Operator::V3 => Stab::So2,
            Operator::D1 => Stab::Full,
        }
    }

    /// Required i(source) - i(target) mod 8.
    pub fn drop(self) -> i64 {
        match self {
            Operator::Boundary | Operator::V1 | Operator::D1 => 1,
            Operator::V2 => 2,
            Operator::V3 => 3,
            Operator::UFloer | Operator::V4 | Operator::D2 => 4,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed constraint on a datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingHalf(Ring),
    DuplicateLabel(String),
    GradingOutOfRange { label: String, grading: i64 },
    Shape { operator: Operator, expected: (usize, usize), found: (usize, usize) },
    Degree { operator: Operator, target: String, source: String, difference: i64 },
    Parity { first: String, second: String, difference: i64, modulus: i64 },
    SquareZero { degree: i64 },
    Module(String),
}

impl Violation {
    /// Machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::MissingHalf(_) => "RingViolation",
            Violation::DuplicateLabel(_) | Violation::GradingOutOfRange { .. } | Violation::Shape { .. } => {
                "ShapeViolation"
            }
            Violation::Degree { .. } => "DegreeViolation",
            Violation::Parity { .. } => "ParityViolation",
            Violation::SquareZero { .. } => "SquareZeroViolation",
            Violation::Module(_) => "ModuleViolation",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingHalf(r) => write!(f, "ring {} does not contain 1/2", r),
            Violation::DuplicateLabel(l) => write!(f, "label {} is used twice", l),
            Violation::GradingOutOfRange { label, grading } => write!(f, "grading {} of {} is not in 0..8", grading, label),
            Violation::Shape { operator, expected, found } => write!(
                f,
                "{} is {}x{}, expected {}x{}",
                operator, found.0, found.1, expected.0, expected.1
            ),
            Violation::Degree { operator, target, source, difference } => write!(
                f,
                "{} has a nonzero entry {} <- {} with grading drop {} (needs {})",
                operator,
                target,
                source,
                difference,
                operator.drop()
            ),
            Violation::Parity { first, second, difference, modulus } => write!(
                f,
                "gradings of {} and {} differ by {}, not a multiple of {}",
                first, second, difference, modulus
            ),
            Violation::SquareZero { degree } => write!(f, "assembled differential has d^2 != 0 out of degree {}", degree),
            Violation::Module(s) => write!(f, "Λ(u)-module identity fails: {}", s),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DonaldsonError {
    #[error("invalid datum: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("ring {0} does not contain 1/2; the Λ(u) models need it (use the barcobar constructions over other rings)")]
    NeedsHalf(Ring),
    #[error("unknown orbit label {0}")]
    UnknownLabel(String),
    #[error("{operator} has no entry {target} <- {origin} (wrong stabilizer type)")]
    WrongType { operator: Operator, target: String, origin: String },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("truncation order {order} is too small (need at least {needed})")]
    TruncationTooSmall { order: usize, needed: usize },
    #[error("{flavor} did not stabilize between windows {narrow} and {wide} (degrees {degrees:?})")]
    StabilizationFailed { flavor: Flavor, narrow: i64, wide: i64, degrees: Vec<i64> },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Module(#[from] DgError),
}

/// Critical orbits with ℤ/8 gradings and the operator matrices between them.
#[derive(Clone, Debug, PartialEq)]
pub struct DonaldsonDatum {
    ring: Ring,
    orbits: Vec<OrbitRecord>,
    operators: BTreeMap<Operator, ExactMatrix>,
}

impl DonaldsonDatum {
    /// All operators zero.
    pub fn new(ring: Ring, orbits: Vec<OrbitRecord>) -> Self {
        let mut d = DonaldsonDatum { ring, orbits, operators: BTreeMap::new() };
        for op in Operator::ALL {
            let m = ExactMatrix::zeros(ring, d.count(op.target()), d.count(op.source()));
            d.operators.insert(op, m);
        }
        d
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn orbits(&self) -> &[OrbitRecord] {
        &self.orbits
    }

    /// Datum positions of the orbits of one type, in order.
    pub fn indices(&self, stab: Stab) -> Vec<usize> {
        (0..self.orbits.len()).filter(|&i| self.orbits[i].stab == stab).collect()
    }

    pub fn count(&self, stab: Stab) -> usize {
        self.orbits.iter().filter(|o| o.stab == stab).count()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.orbits.iter().position(|o| o.label == label)
    }

    pub fn operator(&self, op: Operator) -> &ExactMatrix {
        &self.operators[&op]
    }

    /// Replaces one operator; the shape must match the orbit counts.
    pub fn set_operator(&mut self, op: Operator, m: ExactMatrix) -> Result<(), DonaldsonError> {
        let expected = (self.count(op.target()), self.count(op.source()));
        if (m.rows(), m.cols()) != expected {
            return Err(DonaldsonError::Shape(format!(
                "{} is {}x{}, expected {}x{}",
                op,
                m.rows(),
                m.cols(),
                expected.0,
                expected.1
            )));
        }
        self.operators.insert(op, m.change_ring(self.ring));
        Ok(())
    }

    /// Sets the coefficient of `target` in op(`source`).
    pub fn set_entry(&mut self, op: Operator, target: &str, source: &str, c: Elem) -> Result<(), DonaldsonError> {
        let locate = |label: &str, stab: Stab| -> Result<usize, DonaldsonError> {
            let pos = self.position(label).ok_or_else(|| DonaldsonError::UnknownLabel(label.to_string()))?;
            self.indices(stab).iter().position(|&i| i == pos).ok_or_else(|| DonaldsonError::WrongType {
                operator: op,
                target: target.to_string(),
                origin: source.to_string(),
            })
        };
        let r = locate(target, op.target())?;
        let s = locate(source, op.source())?;
        let c = self.ring.normalize(c);
        self.operators.get_mut(&op).unwrap().set(r, s, c);
        Ok(())
    }

    /// Nonzero entries of an operator as (target label, source label, value).
    pub fn entries(&self, op: Operator) -> Vec<(String, String, Elem)> {
        let (t, s) = (self.indices(op.target()), self.indices(op.source()));
        self.operator(op)
            .triplets()
            .into_iter()
            .map(|(i, j, v)| (self.orbits[t[i]].label.clone(), self.orbits[s[j]].label.clone(), v))
            .collect()
    }
}

/// The five summands C^irr ⊕ C^irr[3] ⊕ C^{U(1)} ⊕ C^{U(1)}[2] ⊕ C^θ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Summand {
    Irr,
    IrrShift,
    So2,
    So2Shift,
    Full,
}

impl Summand {
    pub fn offset(self) -> i64 {
        match self {
            Summand::IrrShift => 3,
            Summand::So2Shift => 2,
            _ => 0,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Summand::IrrShift => "[3]",
            Summand::So2Shift => "[2]",
            _ => "",
        }
    }
}

/// A generator of DCI: one summand copy of one orbit (a datum position).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DciGen {
    pub summand: Summand,
    pub orbit: usize,
}

impl DciGen {
    pub fn new(summand: Summand, orbit: usize) -> Self {
        DciGen { summand, orbit }
    }

    pub fn degree(&self, datum: &DonaldsonDatum) -> i64 {
        (datum.orbits[self.orbit].grading + self.summand.offset()).rem_euclid(PERIOD)
    }

    pub fn is_odd(&self, datum: &DonaldsonDatum) -> bool {
        self.degree(datum) % 2 == 1
    }

    pub fn label(&self, datum: &DonaldsonDatum) -> String {
        format!("{}{}", datum.orbits[self.orbit].label, self.summand.suffix())
    }
}

/// DCI generators in canonical order.
pub(crate) fn dci_generators(datum: &DonaldsonDatum) -> Vec<DciGen> {
    let mut out = Vec::new();
    for (summand, stab) in [
        (Summand::Irr, Stab::Irr),
        (Summand::IrrShift, Stab::Irr),
        (Summand::So2, Stab::So2),
        (Summand::So2Shift, Stab::So2),
        (Summand::Full, Stab::Full),
    ] {
        out.extend(datum.indices(stab).into_iter().map(|o| DciGen::new(summand, o)));
    }
    out
}

/// Differential of DCI as (source, target, coefficient):
///
/// ```text
///  ∂₁    0    0   0   0
///  U_Fl -∂₁   V₄  V₂  D₂
///  V₁    0    0   0   0
///  V₃    0    0   0   0
///  D₁    0    0   0   0
/// ```
pub(crate) fn dci_terms(datum: &DonaldsonDatum) -> Vec<(DciGen, DciGen, Elem)> {
    let ring = datum.ring;
    let irr = datum.indices(Stab::Irr);
    let so2 = datum.indices(Stab::So2);
    let full = datum.indices(Stab::Full);
    let idx = |stab: Stab| match stab {
        Stab::Irr => &irr,
        Stab::So2 => &so2,
        Stab::Full => &full,
    };
    let mut out = Vec::new();
    for op in Operator::ALL {
        let (ts, ss) = (idx(op.target()), idx(op.source()));
        for (r, c, v) in datum.operator(op).triplets() {
            let (t, s) = (ts[r], ss[c]);
            let g = DciGen::new;
            match op {
                Operator::Boundary => {
                    out.push((g(Summand::Irr, s), g(Summand::Irr, t), v.clone()));
                    out.push((g(Summand::IrrShift, s), g(Summand::IrrShift, t), ring.neg(&v)));
                }
                Operator::UFloer => out.push((g(Summand::Irr, s), g(Summand::IrrShift, t), v)),
                Operator::V1 => out.push((g(Summand::Irr, s), g(Summand::So2, t), v)),
                Operator::V3 => out.push((g(Summand::Irr, s), g(Summand::So2Shift, t), v)),
                Operator::D1 => out.push((g(Summand::Irr, s), g(Summand::Full, t), v)),
                Operator::V4 => out.push((g(Summand::So2, s), g(Summand::IrrShift, t), v)),
                Operator::V2 => out.push((g(Summand::So2Shift, s), g(Summand::IrrShift, t), v)),
                Operator::D2 => out.push((g(Summand::Full, s), g(Summand::IrrShift, t), v)),
            }
        }
    }
    out
}

fn assemble(datum: &DonaldsonDatum) -> Result<KeyedComplex<DciGen>, ComplexError> {
    let mut b = ComplexBuilder::cyclic(datum.ring, PERIOD);
    for g in dci_generators(datum) {
        b.add_generator(g, g.degree(datum))?;
    }
    for (s, t, v) in dci_terms(datum) {
        b.add_entry(&s, &t, v)?;
    }
    b.build()
}

/// Every violated constraint: ring, labels, shapes, grading drops of
/// nonzero entries, parity of reducible gradings, and (when the rest
/// passes) d² = 0 of the assembled DCI.
pub fn validate(datum: &DonaldsonDatum) -> Vec<Violation> {
    let mut out = Vec::new();
    if !datum.ring.has_half() {
        out.push(Violation::MissingHalf(datum.ring));
    }
    let mut seen = HashSet::new();
    for o in &datum.orbits {
        if !seen.insert(o.label.as_str()) {
            out.push(Violation::DuplicateLabel(o.label.clone()));
        }
        if !(0..PERIOD).contains(&o.grading) {
            out.push(Violation::GradingOutOfRange { label: o.label.clone(), grading: o.grading });
        }
    }
    let structural = !out.iter().all(|v| matches!(v, Violation::MissingHalf(_)));
    let mut shapes_ok = true;
    for op in Operator::ALL {
        let m = datum.operator(op);
        let expected = (datum.count(op.target()), datum.count(op.source()));
        if (m.rows(), m.cols()) != expected {
            out.push(Violation::Shape { operator: op, expected, found: (m.rows(), m.cols()) });
            shapes_ok = false;
        }
    }
    if structural || !shapes_ok {
        return out;
    }
    let mut degrees_ok = true;
    for op in Operator::ALL {
        for (t, s, _) in datum.entries(op) {
            let g = |l: &str| datum.orbits[datum.position(l).unwrap()].grading;
            let diff = (g(&s) - g(&t)).rem_euclid(PERIOD);
            if diff != op.drop() {
                out.push(Violation::Degree { operator: op, target: t, source: s, difference: diff });
                degrees_ok = false;
            }
        }
    }
    let reducible: Vec<&OrbitRecord> = datum.orbits.iter().filter(|o| o.stab != Stab::Irr).collect();
    for (i, a) in reducible.iter().enumerate() {
        for b in &reducible[i + 1..] {
            let modulus = if a.stab == Stab::Full && b.stab == Stab::Full { 4 } else { 2 };
            let difference = (a.grading - b.grading).rem_euclid(PERIOD);
            if difference % modulus != 0 {
                out.push(Violation::Parity { first: a.label.clone(), second: b.label.clone(), difference, modulus });
            }
        }
    }
    if degrees_ok {
        match assemble(datum) {
            Err(ComplexError::NotSquareZero(k)) => out.push(Violation::SquareZero { degree: k }),
            Err(e) => out.push(Violation::Module(e.to_string())),
            Ok(_) => {}
        }
    }
    out
}

pub(crate) fn require_valid(datum: &DonaldsonDatum) -> Result<(), DonaldsonError> {
    if !datum.ring.has_half() {
        return Err(DonaldsonError::NeedsHalf(datum.ring));
    }
    let v = validate(datum);
    if !v.is_empty() {
        return Err(DonaldsonError::Invalid(v));
    }
    Ok(())
}

/// DCI as a left dg-module over Λ(u₃), u acting as the identity
/// C^irr → C^irr[3].
#[derive(Clone, Debug)]
pub struct Dci {
    pub keyed: KeyedComplex<DciGen>,
    pub module: DgModule,
}

pub fn build_dci(datum: &DonaldsonDatum) -> Result<Dci, DonaldsonError> {
    require_valid(datum)?;
    let keyed = assemble(datum)?;
    let ring = datum.ring;
    let lambda = Arc::new(exterior_algebra(3, ring)?);
    let u = (3, 0);
    let mut actions = HashMap::new();
    for o in datum.indices(Stab::Irr) {
        let src = DciGen::new(Summand::Irr, o);
        let tgt = DciGen::new(Summand::IrrShift, o);
        let (k, i) = keyed.position(&src).unwrap();
        let v = keyed.vector(k + 3, &[(tgt, ring.one())])?;
        actions.insert(((k, i), u), v);
    }
    let module = DgModule::new(keyed.complex.clone(), lambda, Side::Left, actions)?;
    Ok(Dci { keyed, module })
}

/// Euler characteristic from the orbit count: Irr 0, SO2 2, Full 1.
pub fn euler_characteristic(datum: &DonaldsonDatum) -> i64 {
    datum.orbits.iter().map(|o| o.stab.euler()).sum()
}

/// The datum of the orientation-reversed manifold: gradings
/// -i(α) - dim α, operators D₁ ↔ D₂ᵀ, V₁ ↔ V₂ᵀ, V₃ ↔ V₄ᵀ, U_Fl ↦ U_Flᵀ and
/// ∂₁ ↦ -∂₁ᵀ. With this sign the dual of DCI of the reverse is DCI itself
/// (up to reordering summands), and d² = 0 is preserved.
pub fn reverse_orientation(datum: &DonaldsonDatum) -> DonaldsonDatum {
    let orbits = datum
        .orbits
        .iter()
        .map(|o| OrbitRecord { label: o.label.clone(), stab: o.stab, grading: (-o.grading - o.stab.dimension()).rem_euclid(PERIOD) })
        .collect();
    let mut out = DonaldsonDatum::new(datum.ring, orbits);
    let t = |op: Operator| datum.operator(op).transpose();
    let pairs = [
        (Operator::Boundary, t(Operator::Boundary).neg()),
        (Operator::UFloer, t(Operator::UFloer)),
        (Operator::V1, t(Operator::V2)),
        (Operator::V2, t(Operator::V1)),
        (Operator::V3, t(Operator::V4)),
        (Operator::V4, t(Operator::V3)),
        (Operator::D1, t(Operator::D2)),
        (Operator::D2, t(Operator::D1)),
    ];
    for (op, m) in pairs {
        out.operators.insert(op, m);
    }
    out
}
