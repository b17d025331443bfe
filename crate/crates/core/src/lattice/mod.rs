//! Exact rational convex geometry: cones, duality, polytopes, volumes and
//! mixed volumes.

pub mod cone;
pub mod linalg;
pub mod polytope;
pub mod rational;

pub use cone::{dual_cone, extremal_rays, Pairing, RationalCone, RaySet};
pub use polytope::{minkowski_sum, mixed_volume, LatticePolytope};
pub use rational::{fmt_q, parse_q, q, qr, RationalVector, Q};
