//! JSON encoding of exact values and the output envelope.

use std::io::Write;
use std::path::Path;

use dmajor_core::arith::fmt_pq;
use dmajor_core::{HalfspaceSystem, Permutation, RMatrix, RVec, Rational, RowMask};
use serde_json::{json, Value};

pub fn q(r: &Rational) -> Value {
    Value::String(fmt_pq(r))
}

pub fn vector(v: &RVec) -> Value {
    v.iter().map(q).collect()
}

pub fn matrix(m: &RMatrix) -> Value {
    m.to_rows().iter().map(|row| row.iter().map(q).collect::<Value>()).collect()
}

pub fn mask(m: RowMask) -> Value {
    m.indices().iter().map(|i| json!(i + 1)).collect()
}

pub fn permutation(sigma: &Permutation) -> Value {
    sigma.images().iter().map(|i| json!(i + 1)).collect()
}

pub fn hrep(sys: &HalfspaceSystem) -> Value {
    let b: Vec<Value> = RowMask::proper(sys.n())
        .into_iter()
        .map(|m| json!({ "mask": mask(m), "value": q(sys.value(m)) }))
        .collect();
    json!({ "b": b, "T": q(sys.trace()) })
}

pub fn labelled_vertices(vertices: &[(RVec, Permutation)]) -> Value {
    vertices
        .iter()
        .map(|(v, sigma)| json!({ "point": vector(v), "sigma": permutation(sigma) }))
        .collect()
}

pub fn envelope(n: usize, inputs: Value, results: Value) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "n": n,
        "inputs": inputs,
        "results": results,
    })
}

/// Writes pretty JSON to `path`, or to stdout for `-`.
pub fn write(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("values are plain JSON");
    text.push('\n');
    if path == Path::new("-") {
        std::io::stdout().write_all(text.as_bytes())
    } else {
        std::fs::write(path, text)
    }
}
