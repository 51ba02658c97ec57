use thiserror::Error;

/// Errors raised by chain construction, analysis and bound checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix must have at least 2 states, got {0}")]
    TooSmall(usize),

    #[error("entry ({row}, {col}) = {value} is negative or not finite")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("entry ({row}, {col}) = {value} exceeds 1")]
    EntryAboveOne { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, outside tolerance {tolerance}")]
    RowSumViolation { row: usize, sum: f64, tolerance: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("chain is not ergodic: {0}")]
    NotErgodic(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("parameter {name} = {value} out of range {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("expected exactly one zero singular value of I - P, found {0}")]
    RankDefectNotOne(usize),

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEps(f64),

    #[error("epsilon {eps} must be below 1/sqrt(n) = {limit}")]
    EpsTooLarge { eps: f64, limit: f64 },

    #[error("mixing time exceeds iteration cap {0}")]
    IterationCap(usize),

    #[error("certified horizon {horizon} exceeds cap {cap}")]
    HorizonExceedsCap { horizon: u64, cap: u64 },

    #[error("scan exceeded cap {cap}")]
    CapExceeded {
        cap: u64,
        /// Per-T worst gap observed before giving up, for diagnosis.
        trace: Vec<(u64, f64)>,
    },

    #[error("bad generator parameters: {0}")]
    BadParams(String),

    #[error("numerical invariant violated: {0}")]
    Numerical(String),

    #[error("chain file: {0}")]
    ChainFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors produced by a scan or horizon running into its cap.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::IterationCap(_) | Error::HorizonExceedsCap { .. } | Error::CapExceeded { .. }
        )
    }
}
