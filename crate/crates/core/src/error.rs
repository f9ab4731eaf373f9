use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide {to}")]
    ConductorMismatch { from: u32, to: u32 },
    #[error("variable sets differ: {left} vs {right}")]
    VarSetMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not in the polynomial's variable set")]
    VariableNotPresent(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) is not constant")]
    NonConstantEntry { row: usize, col: usize },
    #[error("size {size} exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("value is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("entry ({row}, {col}) is zero")]
    ZeroEntry { row: usize, col: usize },
    #[error("h*h is not n times the identity")]
    NotScaledUnitary,
    #[error("column {column} is not an eigenvector of B for its eigenvalue")]
    EigenVerification { column: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
