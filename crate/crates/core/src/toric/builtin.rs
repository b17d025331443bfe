//! Shipped fans.

use crate::error::{Error, Result};

use super::fan::{Fan, FanSpec};

const FANS: &[(&str, &str)] = &[
    ("P1", include_str!("../../data/fans/P1.json")),
    ("P2", include_str!("../../data/fans/P2.json")),
    ("P1xP1", include_str!("../../data/fans/P1xP1.json")),
    ("F1", include_str!("../../data/fans/F1.json")),
    ("F2", include_str!("../../data/fans/F2.json")),
    ("F3", include_str!("../../data/fans/F3.json")),
    ("F4", include_str!("../../data/fans/F4.json")),
    ("Bl2P2", include_str!("../../data/fans/Bl2P2.json")),
    ("dP6", include_str!("../../data/fans/dP6.json")),
    ("P1^3", include_str!("../../data/fans/P1^3.json")),
    ("BlP3", include_str!("../../data/fans/BlP3.json")),
];

pub fn fan_names() -> Vec<&'static str> {
    FANS.iter().map(|(n, _)| *n).collect()
}

/// Shipped fan by name; `F0` is an alias of `P1xP1`.
pub fn fan(name: &str) -> Result<Fan> {
    let key = if name == "F0" { "P1xP1" } else { name };
    let (_, text) =
        FANS.iter().find(|(n, _)| *n == key).ok_or_else(|| Error::input(format!("unknown toric instance {name:?}")))?;
    let spec: FanSpec = serde_json::from_str(text).expect("shipped fan parses");
    Fan::from_spec(spec)
}
