use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: modulus {left} vs {right}")]
    RingMismatch { left: u32, right: u32 },

    #[error("term {term} is not divisible by {divisor}")]
    NotDivisible { term: String, divisor: String },

    #[error("variable {var} has a fractional weight; cannot forget colors")]
    FractionalWeight { var: String },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration refused: estimated {estimate} elements exceeds cap {cap}")]
    CapExceeded { estimate: String, cap: u64 },

    #[error("not a member of the domain: {0}")]
    NotMember(String),

    #[error("not a fixed point: {0}")]
    NotFixed(String),

    #[error("config error: {0}")]
    Config(String),
}
