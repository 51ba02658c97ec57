//! Validated chain types: stochastic matrices, distributions, structural
//! checks, stationary distributions and the interpolated family.

mod distribution;
mod matrix;
mod pair;
mod stationary;
mod structure;

pub use distribution::{l1_distance, l2_distance, tv_distance, Distribution, MASS_TOLERANCE};
pub use matrix::{validate_stochastic, StochasticMatrix, DEFAULT_ROW_TOLERANCE};
pub use pair::{interpolate, ChainPair};
pub use stationary::{
    stationary, stationary_residual, stationary_with_tol, DEFAULT_RESIDUAL_TOL, POWER_ITERATION_CAP,
    POWER_ITERATION_TOL,
};
pub use structure::{structure, StructureReport};

pub(crate) use distribution::tv_slices;
pub(crate) use matrix::left_mul;
pub(crate) use stationary::solve_stationary;
