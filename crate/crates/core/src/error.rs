use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Variant names mirror the error codes printed by the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("NON_POSITIVE_MASS: block {index} has mass {mass}")]
    NonPositiveMass { index: usize, mass: f64 },

    #[error("EMPTY_PARTITION: at least one partition block is required")]
    EmptyPartition,

    #[error("BAD_PARTITION_INDEX: expected block index {expected}, found {found}")]
    BadPartitionIndex { expected: usize, found: usize },

    #[error("DEGENERATE_INTERVAL: [{a}, {b}] is not a proper interval")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("BAD_NODE_COUNT: {0}")]
    BadNodeCount(String),

    #[error("BAD_WEIGHTS: {0}")]
    BadWeights(String),

    #[error("NON_FINITE_INTEGRAND: value {value} at point {point}{}", index.map(|k| format!(" (sequence index {k})")).unwrap_or_default())]
    NonFiniteIntegrand {
        point: String,
        index: Option<usize>,
        value: f64,
    },

    #[error("OVERFLOW: value exceeds the floating-point range at point {point}{}", index.map(|k| format!(" (sequence index {k})")).unwrap_or_default())]
    Overflow { point: String, index: Option<usize> },

    #[error("EMPTY_GRID: the probing grid has no points")]
    EmptyGrid,

    #[error("UNSORTED_GRID: grid must be strictly increasing and positive (position {position})")]
    UnsortedGrid { position: usize },

    #[error("GRID_TOO_SMALL: {0}")]
    GridTooSmall(String),

    #[error("ZERO_DENOMINATOR: trial function vanishes at positive point {x}")]
    ZeroDenominator { x: f64 },

    #[error("WINDOW_EMPTY: window requires m >= n + 1 (n = {n}, m = {m})")]
    WindowEmpty { n: usize, m: usize },

    #[error("BAD_THRESHOLDS: {0}")]
    BadThresholds(String),

    #[error("BAD_GRID: {0}")]
    BadGrid(String),

    #[error("BAD_DEGREES: difference kernel requires m >= n + 1 (m = {m}, n = {n})")]
    BadDegrees { m: usize, n: usize },

    #[error("DIMENSION_MISMATCH: {0}")]
    DimensionMismatch(String),

    #[error("TRIAL_CLASS: {0}")]
    TrialClass(String),

    #[error("BAD_SPEC: {0}")]
    BadSpec(String),

    #[error("CONFIG_INVALID: field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },

    #[error("INPUT_NOT_FOUND: {0}")]
    InputNotFound(String),

    #[error("BAD_INPUT_FILE: {path}: {message}")]
    BadInputFile { path: PathBuf, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code: 3 for invalid configuration, 4 for unreadable input,
    /// 5 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigInvalid { .. }
            | Error::BadThresholds(_)
            | Error::BadGrid(_)
            | Error::WindowEmpty { .. }
            | Error::TrialClass(_)
            | Error::DimensionMismatch(_)
            | Error::BadSpec(_) => 3,
            Error::InputNotFound(_) | Error::BadInputFile { .. } | Error::Io(_) | Error::Csv(_) => 4,
            _ => 5,
        }
    }
}
