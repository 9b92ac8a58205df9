use thiserror::Error;

use crate::arith::Field;

/// Errors raised by the exact-arithmetic, polynomial and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unlucky prime {0}: it divides a denominator or kills a leading coefficient")]
    UnluckyPrime(u64),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{name}` at line {line}, column {column} (expected x0, x1, ...)")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("degree error: {0}")]
    Degree(String),
    #[error(
        "leading x-coefficient of the restricted form vanishes (D lies on the hypersurface); \
         change coordinates on L"
    )]
    LineAtInfinity,
    #[error("degenerate flag: {0}")]
    DegenerateFlag(String),
    #[error("no point found on the hypersurface mod {prime} after {attempts} random lines")]
    SamplingExhausted { prime: u64, attempts: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("expected a matrix of rank {expected}, found rank {found}")]
    Rank { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
