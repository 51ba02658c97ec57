use nalgebra::DMatrix;

use super::Distribution;
use crate::{Error, Result};

/// Row-sum tolerance applied when ingesting raw matrices.
pub const DEFAULT_ROW_TOLERANCE: f64 = 1e-9;

/// A validated row-stochastic `n x n` matrix, `n >= 2`.
///
/// Entries lie in `[0, 1]` and every row sums to one up to a few ulps.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    inner: DMatrix<f64>,
}

/// Validate a raw row-major matrix and return it as a [`StochasticMatrix`].
///
/// Entries within `tolerance` below zero are clamped to zero, and rows whose
/// sum is off by more than rounding noise are rescaled to sum to one.
pub fn validate_stochastic(raw: &[Vec<f64>], tolerance: f64) -> Result<StochasticMatrix> {
    let n = raw.len();
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare { rows: n, row: i, len: row.len() });
        }
    }
    let mut inner = DMatrix::<f64>::zeros(n, n);
    for (i, row) in raw.iter().enumerate() {
        let mut sum = 0.0;
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < -tolerance {
                return Err(Error::NegativeEntry { row: i, col: j, value: v });
            }
            if v > 1.0 + tolerance {
                return Err(Error::EntryAboveOne { row: i, col: j, value: v });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > tolerance {
            return Err(Error::RowSumViolation { row: i, sum, tolerance });
        }
        for (j, &v) in row.iter().enumerate() {
            inner[(i, j)] = v.clamp(0.0, 1.0);
        }
    }
    normalize_rows(&mut inner);
    Ok(StochasticMatrix { inner })
}

/// Rescale rows that drifted from unit sum by more than rounding noise.
///
/// Rows already within `n` ulps of one are left bit-for-bit untouched, which
/// makes the operation idempotent.
fn normalize_rows(m: &mut DMatrix<f64>) {
    let n = m.ncols();
    let noise = n as f64 * f64::EPSILON;
    for i in 0..m.nrows() {
        let mut row = m.row_mut(i);
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > noise {
            row /= sum;
        }
    }
}

impl StochasticMatrix {
    /// Shorthand for [`validate_stochastic`] with the default tolerance.
    pub fn from_rows(raw: &[Vec<f64>]) -> Result<Self> {
        validate_stochastic(raw, DEFAULT_ROW_TOLERANCE)
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        Ok(Self { inner: DMatrix::identity(n, n) })
    }

    /// Wrap a matrix already known to be stochastic up to rounding.
    ///
    /// Negative rounding residue is clamped and rows renormalized.
    pub(crate) fn from_matrix_unchecked(mut inner: DMatrix<f64>) -> Self {
        inner.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        normalize_rows(&mut inner);
        Self { inner }
    }

    pub fn n(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.inner.row(i).iter().copied().collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.row(i)).collect()
    }

    /// One step of the chain: the row vector `nu * P`.
    pub fn step(&self, nu: &Distribution) -> Result<Distribution> {
        if nu.n() != self.n() {
            return Err(Error::DimensionMismatch { left: nu.n(), right: self.n() });
        }
        Ok(Distribution::from_raw(left_mul(nu.mass(), &self.inner)))
    }

    /// Matrix product `self * other`, again a stochastic matrix.
    pub fn compose(&self, other: &StochasticMatrix) -> Result<StochasticMatrix> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self::from_matrix_unchecked(&self.inner * &other.inner))
    }

    /// Convex combination `(1 - t) * self + t * other` with no range checks.
    pub(crate) fn blend(&self, other: &StochasticMatrix, t: f64) -> StochasticMatrix {
        let inner = self.inner.zip_map(&other.inner, |a, b| (1.0 - t) * a + t * b);
        Self::from_matrix_unchecked(inner)
    }
}

/// Row vector times matrix.
pub(crate) fn left_mul(v: &[f64], m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.ncols();
    let mut out = vec![0.0; n];
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += vi * m[(i, j)];
        }
    }
    out
}
