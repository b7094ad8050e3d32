use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
///
/// Indices carried by variants are zero-based; `Display` renders them one-based
/// so messages line up with how analysts number concepts.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("matrix must be at least 2x2, got {0}x{0}")]
    TooFewConcepts(usize),

    #[error("entry ({}, {}) = {value} is not strictly positive", .row + 1, .col + 1)]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("diagonal entry ({}, {}) = {value}, expected exactly 1", .index + 1, .index + 1)]
    NonUnitDiagonal { index: usize, value: f64 },

    #[error(
        "reciprocity violated at ({}, {}): |m_ij * m_ji - 1| = {residual} exceeds {tolerance}",
        .row + 1, .col + 1
    )]
    ReciprocityViolation {
        row: usize,
        col: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("triad ({i}, {j}, {k}) is invalid for a {n}x{n} matrix")]
    IndexError { i: usize, j: usize, k: usize, n: usize },

    #[error("the inconsistency index needs at least 3 concepts, got {0}")]
    TooSmall(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("theorem bound undefined for n = {n}, r = {r} (requires n >= 3 and 0 < r <= n - 2)")]
    DomainError { n: usize, r: usize },

    #[error("linear system is singular: pivot {pivot:e} at column {} below {threshold:e}", .column + 1)]
    SingularSystem {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("solution is not strictly positive: {label} = {value}")]
    InfeasibleSolution {
        label: String,
        value: f64,
        /// Full solved vector over the unknown concepts, in partition order.
        solution: Vec<f64>,
    },

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error(
        "M-matrix checks disagree: inverse-nonnegative = {inverse_nonnegative}, \
         s = {s}, spectral radius = {spectral_radius}"
    )]
    NumericalDisagreement {
        inverse_nonnegative: bool,
        s: f64,
        spectral_radius: f64,
    },

    #[error("input error: {0}")]
    Input(String),
}

/// Coarse classification used for exit codes and HTTP statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Infeasible,
    Singular,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SingularSystem { .. } => ErrorKind::Singular,
            Error::InfeasibleSolution { .. } => ErrorKind::Infeasible,
            Error::NonConvergence { .. } | Error::NumericalDisagreement { .. } => {
                ErrorKind::Numerical
            }
            _ => ErrorKind::Input,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
