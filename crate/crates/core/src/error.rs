//! Shared error type for the geometry, quadrature and solver layers.

use thiserror::Error;

use crate::quad::QuadResult;

/// Everything that can go wrong across the crate, from coincident circle
/// points to an exhausted subdivision budget.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two or more input points coincide within the chordal tolerance.
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    /// A scalar argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Malformed or inconsistent input: bad files, bad grids, violated
    /// preconditions that are not domain errors of a single scalar.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A right-hand side failed admissibility validation (the symmetry or
    /// six-term residual exceeded tolerance at `sample`).
    #[error("invalid right-hand side: {reason}; worst sample {sample:?}, residual {residual:.3e}")]
    InvalidRhs {
        reason: String,
        sample: Vec<f64>,
        residual: f64,
    },

    /// Adaptive subdivision ran out of budget before reaching the requested
    /// tolerance. `best` carries the estimate computed so far.
    #[error("quadrature tolerance not met: requested {requested:.3e}, achieved {achieved:.3e}")]
    ToleranceNotMet {
        requested: f64,
        achieved: f64,
        best: QuadResult,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
