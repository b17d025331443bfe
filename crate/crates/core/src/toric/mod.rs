//! Smooth projective toric varieties: fans, divisor classes, section
//! polytopes, intersection numbers, nef and pseudoeffective cones, and the
//! volume and positive-product oracle.

pub mod builtin;
pub mod fan;
pub mod positivity;

pub use builtin::{fan, fan_names};
pub use fan::{Fan, FanSpec, Wall};
pub use positivity::MultilinearForm;
