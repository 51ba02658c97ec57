use super::{structure, StochasticMatrix};
use crate::{Error, Result};

/// Initial and final kernels of an adiabatic evolution `P_t = (1 - t) P0 + t P1`.
///
/// Both kernels are irreducible and aperiodic with matching dimension, so every
/// interpolant is too: its support contains the support of `P0` (or `P1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPair {
    p0: StochasticMatrix,
    p1: StochasticMatrix,
}

impl ChainPair {
    pub fn new(p0: StochasticMatrix, p1: StochasticMatrix) -> Result<Self> {
        if p0.n() != p1.n() {
            return Err(Error::DimensionMismatch { left: p0.n(), right: p1.n() });
        }
        for (label, p) in [("P0", &p0), ("P1", &p1)] {
            let report = structure(p);
            if !report.is_ergodic() {
                return Err(Error::NotErgodic(format!(
                    "{label}: irreducible = {}, period = {:?}",
                    report.irreducible, report.period
                )));
            }
        }
        Ok(Self { p0, p1 })
    }

    pub fn p0(&self) -> &StochasticMatrix {
        &self.p0
    }

    pub fn p1(&self) -> &StochasticMatrix {
        &self.p1
    }

    pub fn n(&self) -> usize {
        self.p0.n()
    }

    /// `P_t` for `t` in `[0, 1]`; the endpoints return the stored kernels exactly.
    pub fn at(&self, t: f64) -> Result<StochasticMatrix> {
        interpolate(self, t)
    }

    /// `P_{k/T}` for `0 <= k <= T`.
    pub(crate) fn at_step(&self, k: u64, total: u64) -> StochasticMatrix {
        if k == 0 {
            self.p0.clone()
        } else if k == total {
            self.p1.clone()
        } else {
            self.p0.blend(&self.p1, k as f64 / total as f64)
        }
    }
}

pub fn interpolate(pair: &ChainPair, t: f64) -> Result<StochasticMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { name: "t", value: t, range: "[0, 1]" });
    }
    Ok(if t == 0.0 {
        pair.p0.clone()
    } else if t == 1.0 {
        pair.p1.clone()
    } else {
        pair.p0.blend(&pair.p1, t)
    })
}
