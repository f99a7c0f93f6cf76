//! Browser bindings for the demo page in `www/`. Every entry point takes
//! and returns strings; results are JSON with either a payload or an
//! `error` field, so the page never has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use instanton::catalog;
use instanton::document;
use instanton::donaldson::{self, Flavor};
use instanton::exactlinalg::Ring;

fn fail(kind: &str, message: impl ToString) -> Value {
    json!({ "error": kind, "message": message.to_string() })
}

/// A catalog datum as a document: `sphere`, `poincare` (a = sign),
/// `lens` (a = p, b = q) or `synthetic` (a = seed, b = orbit count).
pub fn catalog_value(name: &str, a: i64, b: i64) -> Value {
    let ring = Ring::Rationals;
    let datum = match name {
        "sphere" => catalog::sphere(ring),
        "poincare" => catalog::poincare_sphere(ring, a),
        "lens" => catalog::lens_space(a, b, ring),
        "synthetic" if a >= 0 && b >= 0 => catalog::synthetic_admissible(a as u64, b as usize, ring),
        _ => return fail("CatalogError", format!("unknown catalog entry {:?}", name)),
    };
    match datum {
        Ok(d) => serde_json::to_value(document::DatumDocument::from_datum(&d)).expect("documents serialize"),
        Err(e) => fail("CatalogError", e),
    }
}

/// Validates a datum document; `{"ok": true}` or the violation list.
pub fn validate_value(text: &str) -> Value {
    match document::parse_datum(text) {
        Err(e) => e.to_json(),
        Ok(d) => {
            let v = donaldson::validate(&d);
            if v.is_empty() {
                json!({ "ok": true, "euler": donaldson::euler_characteristic(&d) })
            } else {
                document::violations_json(&v)
            }
        }
    }
}

/// One flavor of a datum document: the JSON result plus the text table.
pub fn compute_value(text: &str, flavor: &str, window: i64) -> Value {
    let Some(flavor) = Flavor::from_name(flavor) else {
        return fail("FlavorError", format!("unknown flavor {:?}", flavor));
    };
    let datum = match document::parse_datum(text) {
        Ok(d) => d,
        Err(e) => return e.to_json(),
    };
    match donaldson::compute(&datum, flavor, window) {
        Ok(r) => json!({ "result": document::flavor_result_json(&r), "table": document::flavor_result_table(&r) }),
        Err(donaldson::DonaldsonError::Invalid(v)) => document::violations_json(&v),
        Err(e) => fail("ComputationError", e),
    }
}

/// δ(p, q, i) for every q coprime to p and 0 ≤ i ≤ p/2, as rows
/// `{"q": q, "delta": [...]}`.
pub fn delta_value(p: i64) -> Value {
    if !(2..=40).contains(&p) {
        return fail("DeltaError", "p must lie in 2..=40");
    }
    let mut rows = Vec::new();
    for q in 1..p {
        if catalog::inverse_mod(q, p).is_none() {
            continue;
        }
        let mut deltas = Vec::new();
        for i in 0..=p / 2 {
            match catalog::delta_grading(p, q, i) {
                Ok(d) => deltas.push(d),
                Err(e) => return fail("DeltaError", e),
            }
        }
        rows.push(json!({ "q": q, "delta": deltas }));
    }
    json!({ "p": p, "rows": rows })
}

#[wasm_bindgen]
pub fn catalog_datum(name: &str, a: i64, b: i64) -> String {
    serde_json::to_string_pretty(&catalog_value(name, a, b)).expect("values serialize")
}

#[wasm_bindgen]
pub fn validate_datum(text: &str) -> String {
    validate_value(text).to_string()
}

#[wasm_bindgen]
pub fn compute_flavor(text: &str, flavor: &str, window: i64) -> String {
    compute_value(text, flavor, window).to_string()
}

#[wasm_bindgen]
pub fn delta_table(p: i64) -> String {
    delta_value(p).to_string()
}
