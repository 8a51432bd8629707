//! JavaScript bindings for the demo page. Every export takes plain strings
//! and returns a JSON string: `{"ok": true, ...}` or `{"ok": false, "error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hypersum::gosper::{gosper_antidifference, GosperResult};
use hypersum::hyperterm::{parse_term, ParamBinding};
use hypersum::series::known_gf;
use hypersum::zeilberger::{creative_telescope, sum_recurrence_natural};

// keep the page responsive: these are exact computations
const MAX_JMAX: u32 = 4;
const MAX_ORDER: u32 = 200;

fn fail(msg: impl ToString) -> String {
    json!({"ok": false, "error": msg.to_string()}).to_string()
}

fn done(mut v: Value) -> String {
    v["ok"] = Value::Bool(true);
    v.to_string()
}

/// Antidifference of `term` in `k`, or a proof that none is hypergeometric.
#[wasm_bindgen]
pub fn gosper(term: &str) -> String {
    let f = match parse_term(term) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    match gosper_antidifference(&f, &ParamBinding::new()) {
        Ok(GosperResult::Summable(cert)) => done(json!({
            "summable": true,
            "R": cert.text(),
            "G": cert.antidifference(&f).to_string(),
        })),
        Ok(GosperResult::NotSummable) => done(json!({"summable": false})),
        Err(e) => fail(e),
    }
}

/// Recurrence in `n` for `sum_k term`, searching orders `1..=jmax`.
#[wasm_bindgen]
pub fn zeilberger(term: &str, jmax: u32) -> String {
    if jmax == 0 || jmax > MAX_JMAX {
        return fail(format!("jmax must be between 1 and {MAX_JMAX}"));
    }
    let f = match parse_term(term) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let b = ParamBinding::new();
    let cert = match creative_telescope(&f, jmax as usize, &b) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let natural = sum_recurrence_natural(&f, &cert, &b);
    done(json!({
        "recurrence": natural.as_ref().map_or_else(|_| cert.recurrence.to_string(), |r| r.to_string()),
        "certificate": cert.certificate_text(),
        "natural": natural.is_ok(),
    }))
}

/// First `order + 1` coefficients of `catalan`, `central_binomial` or `ballot(k)`.
#[wasm_bindgen]
pub fn series_coefficients(name: &str, order: u32) -> String {
    if order > MAX_ORDER {
        return fail(format!("order is capped at {MAX_ORDER}"));
    }
    match known_gf(name, order as usize) {
        Ok(s) => done(json!({
            "coeffs": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })),
        Err(e) => fail(e),
    }
}
