use serde::Serialize;

use crate::{Error, Result};

/// Tolerance on the total mass of a [`Distribution`].
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A probability vector on `n` states.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    mass: Vec<f64>,
}

impl Distribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        if let Some((i, v)) = mass.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidDistribution(format!("entry {i} = {v}")));
        }
        let sum: f64 = mass.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("mass sums to {sum}")));
        }
        Ok(Self { mass })
    }

    /// Normalize nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidDistribution("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    /// Build from the output of a numerical routine: rounding residue below
    /// zero is clamped and the vector rescaled to unit mass.
    pub(crate) fn from_raw(mut mass: Vec<f64>) -> Self {
        mass.iter_mut().for_each(|v| *v = v.max(0.0));
        let sum: f64 = mass.iter().sum();
        if (sum - 1.0).abs() > mass.len() as f64 * f64::EPSILON {
            mass.iter_mut().for_each(|v| *v /= sum);
        }
        Self { mass }
    }

    pub fn point_mass(n: usize, state: usize) -> Result<Self> {
        if state >= n {
            return Err(Error::OutOfRange { name: "state", value: state as f64, range: "[0, n)" });
        }
        let mut mass = vec![0.0; n];
        mass[state] = 1.0;
        Ok(Self { mass })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        Ok(Self { mass: vec![1.0 / n as f64; n] })
    }

    pub fn n(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.mass
    }
}

/// Total variation distance `1/2 * sum_i |a_i - b_i|`.
pub fn tv_distance(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    Ok(tv_slices(a.mass(), b.mass()))
}

pub(crate) fn tv_slices(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
