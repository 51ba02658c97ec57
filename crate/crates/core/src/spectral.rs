//! Singular values of `I - P` and the closed-form quantities built on the
//! smallest nonzero one: the mixing-time lower bound and the continuity radii
//! of `s -> pi_s` at `s = 0`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::markov::{structure, StochasticMatrix};
use crate::{Error, Result};

/// Relative cutoff (times `n * sigma_max`) below which a singular value counts as zero.
pub const DEFAULT_ZERO_THRESHOLD_FACTOR: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub n: usize,
    /// Smallest nonzero singular value of `I - P`.
    pub sigma: f64,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    pub rank_defect: usize,
}

/// Singular values of `a`, descending, by one-sided (Hestenes) Jacobi rotations.
///
/// Columns are orthogonalized pairwise until every pair is orthogonal to
/// working precision; the singular values are then the column norms.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut w = a.clone();
    let cols = w.ncols();
    let rows = w.nrows();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols).map(|j| w.column(j).norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Singular-value summary of `I - P` for an irreducible aperiodic `P`.
pub fn spectral_summary(p: &StochasticMatrix, zero_threshold_factor: f64) -> Result<SpectralSummary> {
    let report = structure(p);
    if !report.is_ergodic() {
        return Err(Error::NotErgodic(format!(
            "irreducible = {}, period = {:?}",
            report.irreducible, report.period
        )));
    }
    let n = p.n();
    let a = DMatrix::<f64>::identity(n, n) - p.as_matrix();
    let singular_values = singular_values(&a);
    let cutoff = zero_threshold_factor * n as f64 * singular_values[0];
    let rank_defect = singular_values.iter().filter(|&&s| s <= cutoff).count();
    if rank_defect != 1 {
        return Err(Error::RankDefectNotOne(rank_defect));
    }
    Ok(SpectralSummary { n, sigma: singular_values[n - 2], singular_values, rank_defect })
}

impl SpectralSummary {
    pub fn of(p: &StochasticMatrix) -> Result<Self> {
        spectral_summary(p, DEFAULT_ZERO_THRESHOLD_FACTOR)
    }

    /// `(1 - 2 sqrt(n) eps) / sigma`; nonpositive values are vacuous.
    pub fn mixing_lower_bound(&self, eps: f64) -> Result<f64> {
        check_eps(eps)?;
        Ok((1.0 - 2.0 * (self.n as f64).sqrt() * eps) / self.sigma)
    }

    /// `eps * sigma / (2 n^{3/2})`, clamped to `[0, 1]`.
    pub fn continuity_delta(&self, eps: f64) -> Result<f64> {
        check_eps(eps)?;
        let n = self.n as f64;
        Ok((eps * self.sigma / (2.0 * n.powf(1.5))).clamp(0.0, 1.0))
    }
}

/// Lower bound on `t_mix(P, eps)` from the smallest nonzero singular value.
pub fn mixing_lower_bound(p: &StochasticMatrix, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    SpectralSummary::of(p)?.mixing_lower_bound(eps)
}

/// Radius `delta` such that `||pi_s - pi_0||_TV <= eps` for all `s <= delta`.
pub fn continuity_delta(p0: &StochasticMatrix, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    SpectralSummary::of(p0)?.continuity_delta(eps)
}

/// Radius `delta = eps (1 - sqrt(n) eps) / (4 n^{3/2} m)` guaranteeing
/// `||pi_s - pi_0||_TV <= eps / 2` for `s <= delta`, where `m` is the sup
/// mixing time at `eps / 2`. Requires `0 < eps < 1 / sqrt(n)`.
pub fn cor1_delta(n: usize, eps: f64, tmix_half_eps: u64) -> Result<f64> {
    check_eps(eps)?;
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    if tmix_half_eps < 1 {
        return Err(Error::OutOfRange { name: "tmix_half_eps", value: 0.0, range: ">= 1" });
    }
    let nf = n as f64;
    let limit = 1.0 / nf.sqrt();
    if eps >= limit {
        return Err(Error::EpsTooLarge { eps, limit });
    }
    let delta = eps * (1.0 - nf.sqrt() * eps) / (4.0 * nf.powf(1.5) * tmix_half_eps as f64);
    Ok(delta.clamp(0.0, 1.0))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveEps(eps))
    }
}
