use thiserror::Error;

/// Failures surfaced by the numerical and algebraic routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QmsError {
    #[error("sign of v_{index} not determined at {prec} bits; raise the precision")]
    PrecisionExhausted { index: usize, prec: u32 },

    #[error("no bracket for v0 found: {detail}")]
    BracketNotFound { detail: String },

    #[error("Newton refinement diverged after {iterations} iterations (residual {residual})")]
    NewtonDiverged { iterations: usize, residual: String },

    #[error("{what} is not an exact division; remainder {remainder}")]
    NotDivisible { what: String, remainder: String },

    #[error("quadrature on [{a}, {b}] did not reach the tolerance")]
    QuadratureFailure { a: String, b: String },

    #[error("chi_{level} vanishes to working precision at s = {s}")]
    NodeEncountered { level: usize, s: String },

    #[error("gamma function pole at {at}")]
    PoleError { at: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, QmsError>;
