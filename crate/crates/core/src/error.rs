//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("seasonal period must be at least 1 (got {0})")]
    InvalidPeriod(usize),

    #[error("length mismatch: {left} actual values vs {right} predicted values")]
    LengthMismatch { left: usize, right: usize },

    #[error("MAPE undefined: actual value at index {index} is zero")]
    ZeroActual { index: usize },

    #[error("series too short: {0}")]
    SeriesTooShort(String),

    #[error("history of length {len} is too short, need at least {required}")]
    HistoryTooShort { len: usize, required: usize },

    #[error("k = {k} exceeds the {candidates} candidate windows available")]
    TooFewCandidates { k: usize, candidates: usize },

    #[error("no cell of the tuning grid can be evaluated on every fold")]
    GridInfeasible,

    #[error(
        "calibration set of {have} scores is too small for delta = {delta}; at least {required} are needed"
    )]
    InsufficientCalibration {
        have: usize,
        required: usize,
        delta: f64,
    },

    #[error("delta = {delta} is infeasible: the calibration size I1 must be at least {min_i1}")]
    InfeasibleDelta { delta: f64, min_i1: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("column `{column}` not found; available headers: {}", available.join(", "))]
    ColumnNotFound {
        column: String,
        available: Vec<String>,
    },

    #[error("parse error at row {row}, cell `{cell}`: {message}")]
    ParseError {
        row: usize,
        cell: String,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end: 3 for data
    /// problems, 4 for infeasible configurations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptySeries
            | Error::NonFiniteValue { .. }
            | Error::LengthMismatch { .. }
            | Error::ZeroActual { .. }
            | Error::FileNotFound(_)
            | Error::ColumnNotFound { .. }
            | Error::ParseError { .. }
            | Error::Io(_) => 3,
            Error::InvalidPeriod(_)
            | Error::SeriesTooShort(_)
            | Error::HistoryTooShort { .. }
            | Error::TooFewCandidates { .. }
            | Error::GridInfeasible
            | Error::InsufficientCalibration { .. }
            | Error::InfeasibleDelta { .. }
            | Error::InvalidParams(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
