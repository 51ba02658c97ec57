//! Mixing, adiabatic and stable adiabatic times for the linearly interpolated
//! Markov chain family `P_t = (1 - t) P0 + t P1`, together with numerical
//! checks of the bounds that relate them.
//!
//! - [`markov`]: validated kernels, distributions, structure, stationary solves.
//! - [`spectral`]: singular values of `I - P` and the formulas built on them.
//! - [`mixing`]: exact `t_mix(P, eps)` and the sup over the family.
//! - [`adiabatic`]: corridors, adiabatic and stable adiabatic times, corridor bounds.
//! - [`verify`]: one-shot report over every bound.
//! - [`generate`], [`chainfile`]: chain generators, the test suite, JSON files.

pub mod adiabatic;
pub mod chainfile;
mod error;
pub mod generate;
pub mod markov;
pub mod mixing;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

/// Slack granted on the passing side of `<= eps` / `< eps` time definitions.
pub const PASS_SLACK: f64 = 1e-12;

/// Tolerated increase of a quantity that must be nonincreasing.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Slack on corridor bound checks.
pub const BOUND_SLACK: f64 = 1e-10;

/// `ceil(x)` for a bound `T >= x`, ignoring floating noise just above an integer.
///
/// `2 * 5^2 / 0.05` evaluates to a hair above 1000 in binary; the bound means 1000.
pub fn ceil_bound(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest.max(1.0) as u64
    } else {
        x.ceil().max(1.0) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::ceil_bound;

    #[test]
    fn ceil_bound_absorbs_rounding() {
        assert_eq!(ceil_bound(2.0 * 25.0 / 0.05), 1000);
        assert_eq!(ceil_bound(1000.5), 1001);
        assert_eq!(ceil_bound(0.3), 1);
        assert_eq!(ceil_bound(41404.99999999999), 41405);
    }
}
