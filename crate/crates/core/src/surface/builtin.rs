//! Shipped surface lattices.

use crate::error::{Error, Result};

use super::lattice::{SurfaceLattice, SurfaceSpec};

const SURFACES: &[(&str, &str)] = &[
    ("P2", include_str!("../../data/surfaces/P2.json")),
    ("F0", include_str!("../../data/surfaces/F0.json")),
    ("F1", include_str!("../../data/surfaces/F1.json")),
    ("F2", include_str!("../../data/surfaces/F2.json")),
    ("F3", include_str!("../../data/surfaces/F3.json")),
    ("F4", include_str!("../../data/surfaces/F4.json")),
    ("Bl2P2", include_str!("../../data/surfaces/Bl2P2.json")),
    ("dP6", include_str!("../../data/surfaces/dP6.json")),
];

pub fn surface_names() -> Vec<&'static str> {
    SURFACES.iter().map(|(n, _)| *n).collect()
}

/// Shipped lattice by name; `P1xP1` is an alias of `F0` and `Bl1P2` of `F1`.
pub fn surface(name: &str) -> Result<SurfaceLattice> {
    let key = match name {
        "P1xP1" => "F0",
        "Bl1P2" => "F1",
        "Bl3P2" => "dP6",
        other => other,
    };
    let (_, text) = SURFACES
        .iter()
        .find(|(n, _)| *n == key)
        .ok_or_else(|| Error::input(format!("unknown surface instance {name:?}")))?;
    let spec: SurfaceSpec = serde_json::from_str(text).expect("shipped surface parses");
    SurfaceLattice::from_spec(spec)
}
