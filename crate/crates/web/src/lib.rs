//! Browser bindings: classify a graph, reduce a word, and tabulate verdicts
//! over a range of labels. Every function takes and returns strings (JSON
//! on output) so it can be called from plain JavaScript and tested natively.

use gbsknot::graph::RawEdge;
use gbsknot::{classify, parse, LabeledGraph, NKnot, OneKnot, Report, Word, WordEngine};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest label range accepted by [`verdict_grid`].
pub const GRID_MAX: u32 = 60;

fn error(message: impl Into<String>) -> String {
    json!({ "error": message.into() }).to_string()
}

/// Full classification report for graph text, or `{"error": ...}`.
#[wasm_bindgen]
pub fn classify_graph(text: &str) -> String {
    let g = match parse(text) {
        Ok(g) => g,
        Err(e) => return error(format!("line {}, column {}: {}", e.line, e.col, e.message)),
    };
    match classify(&g) {
        Ok(v) => Report::new("input", &v).to_json(),
        Err(e) => error(e.to_string()),
    }
}

/// Normal form of `word` in the group of the graph, with identity and
/// ellipticity tests.
#[wasm_bindgen]
pub fn reduce_word(text: &str, word: &str) -> String {
    let g = match parse(text) {
        Ok(g) => g,
        Err(e) => return error(format!("line {}, column {}: {}", e.line, e.col, e.message)),
    };
    let w: Word = match word.parse() {
        Ok(w) => w,
        Err(e) => return error(e.to_string()),
    };
    let engine = WordEngine::new(&g);
    let result = engine.normal_form(&w).and_then(|nf| {
        Ok(json!({
            "normal_form": nf.to_string(),
            "identity": engine.is_identity(&w)?,
            "elliptic": engine.is_elliptic(&w)?,
        }))
    });
    match result {
        Ok(v) => v.to_string(),
        Err(e) => error(e.to_string()),
    }
}

/// Verdict codes for every `(p, q)` with `1 <= p, q <= max`, on a single
/// edge (`kind = "edge"`) or a loop (`kind = "loop"`). Row `p - 1`, column
/// `q - 1`: `"1"` 1-knot and n-knot group, `"n"` n-knot only, `"u"` unknot,
/// `"-"` neither.
#[wasm_bindgen]
pub fn verdict_grid(kind: &str, max: u32) -> String {
    if !(1..=GRID_MAX).contains(&max) {
        return error(format!("max must be between 1 and {GRID_MAX}"));
    }
    if kind != "edge" && kind != "loop" {
        return error(format!("kind must be `edge` or `loop`, got `{kind}`"));
    }
    let make = |p: i64, q: i64| -> LabeledGraph {
        let e = match kind {
            "loop" => RawEdge::new("t", "a", p, "a", q),
            _ => RawEdge::new("e", "a", p, "b", q),
        };
        LabeledGraph::new(Vec::<String>::new(), vec![e]).expect("nonzero labels")
    };
    let mut rows = Vec::new();
    for p in 1..=max as i64 {
        let mut row = String::new();
        for q in 1..=max as i64 {
            let code = match classify(&make(p, q)) {
                Ok(v) => match (&v.one_knot, &v.n_knot_ge3) {
                    (OneKnot::Unknot, _) | (_, NKnot::Unknot) => 'u',
                    (OneKnot::Yes { .. }, _) => '1',
                    (_, NKnot::Yes(_)) => 'n',
                    _ => '-',
                },
                Err(_) => '?',
            };
            row.push(code);
        }
        rows.push(Value::from(row));
    }
    json!({ "kind": kind, "max": max, "rows": rows }).to_string()
}
