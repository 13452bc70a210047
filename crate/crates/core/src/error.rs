use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid Pauli label {0:?}")]
    Label(String),

    #[error("invalid basis state {0:?}")]
    BasisState(String),

    #[error("catalog domain error: {0}")]
    Domain(String),

    #[error("{what} supports at most n = {cap} qubits, got {n}")]
    Scale { what: &'static str, n: usize, cap: usize },

    #[error("index {index} out of range 1..={size}")]
    Index { index: usize, size: usize },

    #[error("added states overlap the feasible set at {0}")]
    Overlap(String),

    #[error("plan is inconsistent with the pair groups: {0}")]
    Plan(String),

    #[error("strategy does not provide all transitions for n = {n}: missing {missing:?}")]
    Validity { n: usize, missing: Vec<(usize, usize)> },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
