//! wasm-bindgen bindings for the demo page in `www/`. Each export returns a
//! JSON string; the plain functions underneath are what the tests call.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ecsquares::curves::{realize_trace, BaseChange, BASE_CHANGE_LIMIT, REALIZE_LIMIT};
use ecsquares::numeric::perfect_square_root;
use ecsquares::sequence::trace_sequence;
use ecsquares::traces::{classify_degeneracy, hasse_radius, waterhouse_admissible, PrimePower};

/// Longest sequence the page will ask for.
pub const MAX_TERMS: u32 = 1000;

#[derive(Debug, Serialize)]
pub struct Row {
    pub n: u32,
    pub trace: String,
    pub points: String,
    pub u: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct TraceInfo {
    pub a: i64,
    pub points: i64,
    pub admissible: bool,
    pub degenerate_m: Option<u32>,
    pub curve: Option<String>,
    /// Smallest `n <= 100` with `N_n` square.
    pub first_square: Option<u32>,
}

#[derive(Debug, Serialize)]
pub struct ExtensionRow {
    pub n: u32,
    pub recurrence: String,
    pub counted: u64,
}

#[derive(Debug, Serialize)]
pub struct ExtensionCheck {
    pub curve: String,
    pub rows: Vec<ExtensionRow>,
    pub agree: bool,
}

fn prime_power(q: u64) -> Result<PrimePower, String> {
    PrimePower::new(q).map_err(|e| e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn sequence_rows(q: u64, a: i64, nmax: u32, squares_only: bool) -> Result<Vec<Row>, String> {
    if nmax > MAX_TERMS {
        return Err(format!("at most {MAX_TERMS} terms"));
    }
    let q = prime_power(q)?;
    let terms = trace_sequence(&q, a, nmax).map_err(|e| e.to_string())?;
    Ok(terms
        .filter_map(|t| {
            let u = perfect_square_root(&t.points);
            if squares_only && u.is_none() {
                return None;
            }
            Some(Row {
                n: t.n,
                trace: t.trace.to_string(),
                points: t.points.to_string(),
                u: u.map(|u| u.to_string()),
            })
        })
        .collect())
}

pub fn landscape(q: u64) -> Result<Vec<TraceInfo>, String> {
    if q > REALIZE_LIMIT {
        return Err(format!("q must be at most {REALIZE_LIMIT}"));
    }
    let q = prime_power(q)?;
    let r = hasse_radius(&q);
    (-r..=r)
        .map(|a| {
            let degeneracy = classify_degeneracy(&q, a).map_err(|e| e.to_string())?;
            let curve = realize_trace(&q, a).map_err(|e| e.to_string())?;
            let first_square = trace_sequence(&q, a, 100)
                .map_err(|e| e.to_string())?
                .find(|t| perfect_square_root(&t.points).is_some())
                .map(|t| t.n);
            Ok(TraceInfo {
                a,
                points: q.q() as i64 + 1 - a,
                admissible: waterhouse_admissible(&q, a),
                degenerate_m: degeneracy.order(),
                curve: curve.map(|c| c.to_string()),
                first_square,
            })
        })
        .collect()
}

pub fn extension_check(q: u64, a: i64) -> Result<ExtensionCheck, String> {
    let q = prime_power(q)?;
    let curve = realize_trace(&q, a)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("no curve over GF({q}) has trace {a}"))?;
    let mut rows = Vec::new();
    for t in trace_sequence(&q, a, 16).map_err(|e| e.to_string())? {
        if t.q_pow > BASE_CHANGE_LIMIT.into() {
            break;
        }
        let counted = BaseChange::new(curve.field(), t.n)
            .and_then(|b| b.count(&curve))
            .map_err(|e| e.to_string())?;
        rows.push(ExtensionRow {
            n: t.n,
            recurrence: t.points.to_string(),
            counted,
        });
    }
    let agree = rows.iter().all(|r| r.recurrence == r.counted.to_string());
    Ok(ExtensionCheck {
        curve: curve.to_string(),
        rows,
        agree,
    })
}

#[wasm_bindgen]
pub fn sequence(q: u64, a: i64, nmax: u32, squares_only: bool) -> Result<String, JsError> {
    sequence_rows(q, a, nmax, squares_only)
        .and_then(|r| json(&r))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trace_landscape(q: u64) -> Result<String, JsError> {
    landscape(q)
        .and_then(|r| json(&r))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify_extension(q: u64, a: i64) -> Result<String, JsError> {
    extension_check(q, a)
        .and_then(|r| json(&r))
        .map_err(|e| JsError::new(&e))
}
