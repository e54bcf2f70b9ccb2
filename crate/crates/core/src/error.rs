//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Expression text could not be tokenized or parsed.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier that is neither a variable nor a known function.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// Expression variable count incompatible with the domain dimension.
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    /// Sample vector length incompatible with the domain shape.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    /// Operation called with exponents from the wrong regime.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// Restriction onto a subset of zero measure.
    #[error("degenerate restriction: functional mass over the subset is {mass}, must be positive")]
    DegenerateRestriction { mass: f64 },

    /// NaN or infinity encountered while evaluating.
    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    /// x^y with x < 0 and non-integer y has no real value.
    #[error("fractional power of negative base: ({base})^({exponent})")]
    NegativeBasePower { base: f64, exponent: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid fuzz config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
