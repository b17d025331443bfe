//! Projective surfaces as intersection lattices with a declared curve list:
//! Zariski decomposition, volume, positive products and the approximate
//! decomposition experiment.

pub mod builtin;
pub mod experiment;
pub mod lattice;
pub mod zariski;

pub use builtin::{surface, surface_names};
pub use experiment::{dyadic_schedule, ExperimentReport, ExperimentRow};
pub use lattice::{is_negative_definite, RegionSpec, SurfaceLattice, SurfaceSpec};
pub use zariski::{NegativeTerm, ZariskiDecomposition};
