//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while reading DIMACS CNF text.
///
/// Every variant names the 1-based line it was detected on, so callers can
/// point users at the offending input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("no `p cnf <vars> <clauses>` header found")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: clause has {len} literals, expected exactly 3")]
    ClauseLength { line: usize, len: usize },
    #[error("line {line}: variable {variable} out of range (instance declares {num_variables})")]
    VariableOutOfRange {
        line: usize,
        variable: u32,
        num_variables: u32,
    },
    #[error("line {line}: variable {variable} repeated within a clause")]
    RepeatedVariable { line: usize, variable: u32 },
    #[error("line {line}: unreadable literal `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: clause line does not end with 0")]
    MissingTerminator { line: usize },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dimacs(#[from] DimacsError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{what}: {requested} variables exceed the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u32,
        cap: u32,
    },
    #[error("cannot build 3-variable clauses over {requested} variables (need at least 3)")]
    TooFewVariables { requested: u32 },
    #[error(
        "cannot generate {requested_clauses} distinct clauses over {num_variables} variables \
         (only {available} exist)"
    )]
    InfeasibleGeneration {
        num_variables: u32,
        requested_clauses: usize,
        available: usize,
    },
    #[error("no instance with a unique solution found after {attempts} attempts")]
    UniqueSolutionNotFound { attempts: usize },
    #[error("dimension mismatch: instance has {expected} variables, assignment has {actual}")]
    DimensionMismatch { expected: u32, actual: u32 },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
