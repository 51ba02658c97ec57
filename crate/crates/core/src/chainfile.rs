//! JSON chain-pair files: `{"name": ..., "n": ..., "P0": [[...]], "P1": [[...]]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::markov::{validate_stochastic, ChainPair, DEFAULT_ROW_TOLERANCE};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpecFile {
    pub name: String,
    pub n: usize,
    #[serde(rename = "P0")]
    pub p0: Vec<Vec<f64>>,
    #[serde(rename = "P1")]
    pub p1: Vec<Vec<f64>>,
}

impl ChainSpecFile {
    pub fn from_pair(name: impl Into<String>, pair: &ChainPair) -> Self {
        Self { name: name.into(), n: pair.n(), p0: pair.p0().to_rows(), p1: pair.p1().to_rows() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ChainFile(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::ChainFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain files always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::ChainFile(format!("{}: {e}", path.display())))
    }

    /// Validate both matrices and the declared size, and build the pair.
    pub fn to_pair(&self) -> Result<ChainPair> {
        let p0 = validate_stochastic(&self.p0, DEFAULT_ROW_TOLERANCE)?;
        let p1 = validate_stochastic(&self.p1, DEFAULT_ROW_TOLERANCE)?;
        if p0.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p0.n() });
        }
        ChainPair::new(p0, p1)
    }
}
