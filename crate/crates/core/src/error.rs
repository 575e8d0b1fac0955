use thiserror::Error;

/// Errors raised by parsing, model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("membership value {0} is outside [0, 1]")]
    InvalidMembership(String),

    #[error("missing binding for `{0}`")]
    MissingBinding(String),

    #[error("undefined power: exponent must be at least 1")]
    UndefinedPower,

    #[error("invalid composition: parts sum to {sum}, expected {expected}")]
    InvalidComposition { sum: u64, expected: u64 },

    #[error("duplicate system `{0}`")]
    DuplicateSystem(String),

    #[error("system `{system}`: duplicate edge {u}-{v}")]
    DuplicateEdge {
        system: String,
        u: String,
        v: String,
    },

    #[error("system `{system}`: self-loop on vertex {vertex}")]
    SelfLoop { system: String, vertex: String },

    #[error("system `{system}`: {message}")]
    InvalidTerminals { system: String, message: String },

    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("matrix is not square: {rows} rows, row of length {len}")]
    NonSquare { rows: usize, len: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
