//! Positivity laboratory: volumes, positive intersection products, cone
//! duality and Monge–Ampère envelopes, computed exactly on toric varieties and
//! surfaces and numerically in torus-symmetric coordinates.

pub mod checks;
pub mod envelope;
pub mod error;
pub mod instance;
pub mod lattice;
pub mod surface;
pub mod toric;

pub use error::{Error, Result};
