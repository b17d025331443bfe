//! Monge–Ampère envelopes in torus-symmetric coordinates: slope-constrained
//! convex envelopes on box grids, gradient-image masses, and the truncated
//! obstacle pipeline that recovers the volume of `alpha - beta`.

pub mod grid;
pub mod pipeline;
pub mod slope;
pub mod transform;

pub use grid::{abs_reg, max_reg, regularized_max, Axis, GridFunction};
pub use pipeline::{
    boundary_delta, build_obstacle, exact_bounds, log_sum_exp_potential, run_morse_pipeline, PipelineReport, RunRow,
    RunSpec, Tolerances,
};
pub use slope::SlopePolytope;
pub use transform::{check_envelope, constrained_envelope, legendre, ma_mass, EnvelopeCheck, GradientImage};
