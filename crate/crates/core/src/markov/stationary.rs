use nalgebra::{DMatrix, DVector};

use super::matrix::left_mul;
use super::{structure, Distribution, StochasticMatrix};
use crate::{Error, Result};

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-12;
pub const POWER_ITERATION_CAP: usize = 1_000_000;
pub const POWER_ITERATION_TOL: f64 = 1e-14;

/// Stationary distribution of an irreducible aperiodic chain, with the
/// default residual tolerance.
pub fn stationary(p: &StochasticMatrix) -> Result<Distribution> {
    stationary_with_tol(p, DEFAULT_RESIDUAL_TOL)
}

/// Stationary distribution `pi` with `||pi P - pi||_1 <= residual_tol`.
///
/// Solves `(I - P^T) pi = 0` with the last equation replaced by `sum(pi) = 1`;
/// falls back to power iteration if the direct solve fails or misses the
/// residual target.
pub fn stationary_with_tol(p: &StochasticMatrix, residual_tol: f64) -> Result<Distribution> {
    let report = structure(p);
    if !report.is_ergodic() {
        return Err(Error::NotErgodic(format!(
            "irreducible = {}, period = {:?}",
            report.irreducible, report.period
        )));
    }
    solve_stationary(p, residual_tol)
}

/// Stationary solve without the structure check. Callers guarantee ergodicity.
pub(crate) fn solve_stationary(p: &StochasticMatrix, residual_tol: f64) -> Result<Distribution> {
    let n = p.n();
    let m = p.as_matrix();
    let mut a = DMatrix::<f64>::identity(n, n) - m.transpose();
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;

    let direct = a.lu().solve(&b).filter(|x| x.iter().all(|v| v.is_finite() && *v > -1e-9));
    let start = match direct {
        Some(x) => {
            let pi = Distribution::from_raw(x.iter().copied().collect());
            if stationary_residual(p, &pi) <= residual_tol {
                return Ok(pi);
            }
            pi
        }
        None => Distribution::from_raw(vec![1.0 / n as f64; n]),
    };
    power_iteration(p, start, residual_tol)
}

fn power_iteration(p: &StochasticMatrix, start: Distribution, residual_tol: f64) -> Result<Distribution> {
    let m = p.as_matrix();
    let mut pi = start.into_vec();
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_ITERATION_CAP {
        let next = left_mul(&pi, m);
        residual = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if residual <= POWER_ITERATION_TOL {
            break;
        }
    }
    let pi = Distribution::from_raw(pi);
    let residual_now = stationary_residual(p, &pi);
    if residual_now <= residual_tol.max(POWER_ITERATION_TOL) {
        Ok(pi)
    } else {
        Err(Error::NoConvergence { iterations: POWER_ITERATION_CAP, residual: residual_now.min(residual) })
    }
}

/// `||pi P - pi||_1`.
pub fn stationary_residual(p: &StochasticMatrix, pi: &Distribution) -> f64 {
    let next = left_mul(pi.mass(), p.as_matrix());
    next.iter().zip(pi.mass()).map(|(a, b)| (a - b).abs()).sum()
}
