//! Class names in the instance basis and aligned terminal tables.

use poslab::lattice::rational::{fmt_q, q, Q};
use poslab::lattice::RationalVector;
use serde_json::{json, Value};

/// `(1, -1)` with labels `H, E` renders as `H - E`.
pub fn named(labels: &[String], v: &[Q]) -> String {
    let mut out = String::new();
    for (l, c) in labels.iter().zip(v) {
        if *c == q(0) {
            continue;
        }
        let neg = *c < q(0);
        let abs = if neg { -c.clone() } else { c.clone() };
        let coeff = if abs == q(1) { String::new() } else { fmt_q(&abs) };
        let sep = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sep);
        out.push_str(&coeff);
        out.push_str(l);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn class_json(labels: &[String], v: &[Q]) -> Value {
    json!({
        "coords": v.iter().map(fmt_q).collect::<Vec<_>>(),
        "name": named(labels, v),
    })
}

pub fn rays_json(labels: &[String], rays: &[RationalVector]) -> Value {
    Value::Array(rays.iter().map(|r| class_json(labels, r)).collect())
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
        out.push('\n');
    }
    out
}
