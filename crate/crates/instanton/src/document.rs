//! JSON documents: the datum format read and written by the command line
//! and the demo, plus serializations of flavor results, violations and
//! spectral-sequence pages.
//!
//! A datum document looks like
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "ring": "Q",
//!   "orbits": [{"label": "theta", "stab": "full", "grading": 0},
//!              {"label": "alpha", "stab": "irr", "grading": 1}],
//!   "operators": {"d_1": [["theta", "alpha", "1"]]}
//! }
//! ```
//!
//! `ring` is `"Q"`, `"Z"` or `{"Fp": p}`. Operator entries are
//! `[target, source, coefficient]` with the coefficient an exact decimal
//! string (`"3"`, `"-1/2"`). Operators left out are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::donaldson::{DonaldsonDatum, DonaldsonError, Flavor, FlavorResult, IndexSpectralSequence, Operator, OrbitRecord, Stab, Violation};
use crate::exactlinalg::{format_elem, ExactMatrix, Ring};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RingTag {
    Q,
    Z,
    Fp(u64),
}

impl RingTag {
    pub fn to_ring(self) -> Result<Ring, DocumentError> {
        match self {
            RingTag::Q => Ok(Ring::Rationals),
            RingTag::Z => Ok(Ring::Integers),
            RingTag::Fp(p) => Ring::prime_field(p).map_err(|_| DocumentError::NotPrime(p)),
        }
    }

    pub fn of(ring: Ring) -> RingTag {
        match ring {
            Ring::Rationals => RingTag::Q,
            Ring::Integers => RingTag::Z,
            Ring::PrimeField(p) => RingTag::Fp(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDocument {
    pub label: String,
    pub stab: String,
    pub grading: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumDocument {
    pub schema_version: String,
    pub ring: RingTag,
    pub orbits: Vec<OrbitDocument>,
    #[serde(default)]
    pub operators: BTreeMap<String, Vec<(String, String, String)>>,
}

/// Problems with the document itself, as opposed to violations of the
/// datum's algebraic constraints.
#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema_version {found:?} is not supported (expected {SCHEMA_VERSION:?})")]
    Version { found: String },
    #[error("Fp needs a prime, got {0}")]
    NotPrime(u64),
    #[error("orbit {label}: unknown stabilizer {stab:?} (expected irr, so2 or full)")]
    Stab { label: String, stab: String },
    #[error("unknown operator {0:?}")]
    Operator(String),
    #[error("{operator}: coefficient {text:?} is not an element of {ring}")]
    Coefficient { operator: String, text: String, ring: Ring },
    #[error("{0}")]
    Entry(DonaldsonError),
}

impl DocumentError {
    pub fn kind(&self) -> &'static str {
        match self {
            DocumentError::Json(_) => "JsonError",
            DocumentError::Version { .. } => "SchemaVersion",
            DocumentError::NotPrime(_) => "RingError",
            DocumentError::Stab { .. } => "StabError",
            DocumentError::Operator(_) => "OperatorError",
            DocumentError::Coefficient { .. } => "CoefficientError",
            DocumentError::Entry(_) => "EntryError",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() })
    }
}

impl DatumDocument {
    pub fn from_datum(datum: &DonaldsonDatum) -> DatumDocument {
        let orbits = datum
            .orbits()
            .iter()
            .map(|o| OrbitDocument { label: o.label.clone(), stab: o.stab.name().to_string(), grading: o.grading })
            .collect();
        let mut operators = BTreeMap::new();
        for op in Operator::ALL {
            let entries: Vec<_> = datum.entries(op).into_iter().map(|(t, s, v)| (t, s, format_elem(&v))).collect();
            if !entries.is_empty() {
                operators.insert(op.name().to_string(), entries);
            }
        }
        DatumDocument { schema_version: SCHEMA_VERSION.to_string(), ring: RingTag::of(datum.ring()), orbits, operators }
    }

    pub fn to_datum(&self) -> Result<DonaldsonDatum, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Version { found: self.schema_version.clone() });
        }
        let ring = self.ring.to_ring()?;
        let mut orbits = Vec::new();
        for o in &self.orbits {
            let stab = Stab::from_name(&o.stab).ok_or_else(|| DocumentError::Stab { label: o.label.clone(), stab: o.stab.clone() })?;
            orbits.push(OrbitRecord::new(o.label.clone(), stab, o.grading));
        }
        let mut datum = DonaldsonDatum::new(ring, orbits);
        for (name, entries) in &self.operators {
            let op = Operator::from_name(name).ok_or_else(|| DocumentError::Operator(name.clone()))?;
            for (t, s, text) in entries {
                let c = ring.parse(text).map_err(|_| DocumentError::Coefficient {
                    operator: name.clone(),
                    text: text.clone(),
                    ring,
                })?;
                datum.set_entry(op, t, s, c).map_err(DocumentError::Entry)?;
            }
        }
        Ok(datum)
    }

    pub fn parse(text: &str) -> Result<DatumDocument, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Parses a datum straight from JSON text.
pub fn parse_datum(text: &str) -> Result<DonaldsonDatum, DocumentError> {
    DatumDocument::parse(text)?.to_datum()
}

pub fn datum_to_json(datum: &DonaldsonDatum) -> String {
    DatumDocument::from_datum(datum).to_json_string()
}

pub fn violations_json(violations: &[Violation]) -> serde_json::Value {
    let list: Vec<_> = violations
        .iter()
        .map(|v| serde_json::json!({ "kind": v.kind(), "message": v.to_string() }))
        .collect();
    serde_json::json!({ "violations": list })
}

fn matrix_json(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(format_elem).collect()).collect()
}

pub fn flavor_result_json(result: &FlavorResult) -> serde_json::Value {
    let groups: BTreeMap<String, _> = result.groups.iter().map(|(k, g)| (k.to_string(), g)).collect();
    let u_maps: BTreeMap<String, _> = result.u_maps.iter().map(|(k, m)| (k.to_string(), matrix_json(m))).collect();
    serde_json::json!({
        "flavor": result.flavor.name(),
        "ring": RingTag::of(result.ring),
        "indexing": if result.flavor == Flavor::Tilde { "class_mod_8" } else { "degree" },
        "window": result.window,
        "truncation": result.truncation,
        "stabilized": result.stabilized,
        "groups": groups,
        "u_maps": u_maps,
    })
}

/// Aligned plain-text table: one row per degree with a nonzero group.
pub fn flavor_result_table(result: &FlavorResult) -> String {
    let head = if result.flavor == Flavor::Tilde { "class" } else { "degree" };
    let mut rows = vec![[head.to_string(), "rank".to_string(), "torsion".to_string(), "generators".to_string()]];
    for (k, g) in &result.groups {
        if g.free_rank == 0 && g.torsion.is_empty() {
            continue;
        }
        rows.push([k.to_string(), g.free_rank.to_string(), g.torsion.join(","), g.generators.join(" ")]);
    }
    let mut widths = [0usize; 4];
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = format!(
        "{} over {}, window {}, truncation {}, stabilized: {}\n",
        result.flavor, result.ring, result.window, result.truncation, result.stabilized
    );
    for r in &rows {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate() {
            let pad = widths[i] - cell.chars().count();
            if i < 2 {
                let _ = write!(line, "{}{}  ", " ".repeat(pad), cell);
            } else {
                let _ = write!(line, "{}{}  ", cell, " ".repeat(pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Page dump: nonzero entries and nonzero differentials d_r : (p, q) →
/// (p - r, q + r - 1) of every page up to r_max.
pub fn spectral_sequence_json(iss: &IndexSpectralSequence) -> serde_json::Value {
    let pages: Vec<_> = iss
        .ss
        .pages
        .iter()
        .skip(1)
        .map(|page| {
            let r = page.r as i64;
            let entries: Vec<_> = page
                .support()
                .into_iter()
                .map(|((p, q), e)| serde_json::json!({ "p": p, "q": q, "free_rank": e.free_rank, "torsion": e.torsion }))
                .collect();
            let diffs: Vec<_> = page
                .nonzero_differentials()
                .into_iter()
                .map(|((p, q), m)| {
                    serde_json::json!({ "source": [p, q], "target": [p - r, q + r - 1], "matrix": matrix_json(m) })
                })
                .collect();
            serde_json::json!({ "r": page.r, "entries": entries, "differentials": diffs })
        })
        .collect();
    serde_json::json!({ "flavor": iss.flavor.name(), "truncation": iss.truncation, "pages": pages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lens_space, poincare_sphere, synthetic_admissible};
    use crate::donaldson::compute;

    #[test]
    fn catalog_round_trips() {
        let data = [
            poincare_sphere(Ring::Rationals, -1).unwrap(),
            lens_space(7, 2, Ring::PrimeField(5)).unwrap(),
            synthetic_admissible(3, 7, Ring::Rationals).unwrap(),
        ];
        for d in data {
            let text = datum_to_json(&d);
            assert_eq!(parse_datum(&text).unwrap(), d);
        }
    }

    #[test]
    fn rational_coefficients_parse_in_fp() {
        let text = r#"{"schema_version": "1", "ring": {"Fp": 7},
            "orbits": [{"label": "a", "stab": "irr", "grading": 1}, {"label": "b", "stab": "irr", "grading": 5}],
            "operators": {"u_fl": [["b", "a", "1/2"]]}}"#;
        let d = parse_datum(text).unwrap();
        assert_eq!(d.operator(Operator::UFloer).get(1, 0), &Ring::PrimeField(7).from_i64(4));
    }

    #[test]
    fn schema_errors() {
        let bad = [
            (r#"{"schema_version": "1", "ring": "Q", "orbits": [], "extra": 1}"#, "JsonError"),
            (r#"{"schema_version": "2", "ring": "Q", "orbits": []}"#, "SchemaVersion"),
            (r#"{"schema_version": "1", "ring": {"Fp": 4}, "orbits": []}"#, "RingError"),
            (r#"{"schema_version": "1", "ring": "Q", "orbits": [{"label": "a", "stab": "so3", "grading": 0}]}"#, "StabError"),
            (r#"{"schema_version": "1", "ring": "Q", "orbits": [], "operators": {"d9": []}}"#, "OperatorError"),
            (
                r#"{"schema_version": "1", "ring": "Q", "orbits": [{"label": "a", "stab": "irr", "grading": 0}],
                   "operators": {"d1": [["a", "a", "0.5"]]}}"#,
                "CoefficientError",
            ),
            (
                r#"{"schema_version": "1", "ring": "Q", "orbits": [{"label": "a", "stab": "irr", "grading": 0}],
                   "operators": {"d_1": [["a", "a", "1"]]}}"#,
                "EntryError",
            ),
            ("[1, 2", "JsonError"),
        ];
        for (text, kind) in bad {
            let err = parse_datum(text).unwrap_err();
            assert_eq!(err.kind(), kind, "{}", text);
            assert_eq!(err.to_json()["error"], kind);
        }
    }

    #[test]
    fn tilde_table_lists_class_zero() {
        let r = compute(&poincare_sphere(Ring::Rationals, 1).unwrap(), Flavor::Tilde, 16).unwrap();
        let table = flavor_result_table(&r);
        let rows: Vec<&str> = table.lines().skip(2).collect();
        assert_eq!(rows.len(), 1);
        let cells: Vec<&str> = rows[0].split_whitespace().collect();
        assert_eq!(cells, ["0", "1", "theta"], "{}", table);
        let json = flavor_result_json(&r);
        assert_eq!(json["groups"]["0"]["free_rank"], 1);
        assert_eq!(json["indexing"], "class_mod_8");
    }
}
