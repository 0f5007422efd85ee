//! Error type shared by every module.
//!
//! One enum instead of per-module error types: the CLI maps every variant
//! to an exit code, and the split there is binary (input that failed to
//! parse vs input that parsed but is mathematically inadmissible).

use thiserror::Error;

/// Everything that can go wrong between reading a document and emitting one.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Square matrix with zero determinant passed to an inversion.
    #[error("singular matrix: {context}")]
    SingularMatrix { context: String },

    /// Two points have the same order key Re(c·β), so the β-order is not total.
    #[error("tie in the order induced by beta: Re(c·beta) = {key} for points {a} and {b}")]
    TieBreak { a: String, b: String, key: String },

    /// det(1 − u·v) = 0 at a node, so the datum is not a quiver.
    #[error("singular monodromy at node {index} (point {point}): det(1 - u*v) = 0")]
    SingularMonodromy { index: usize, point: String },

    /// Frame vectors violate α ≠ 0, β ≠ 0, Re(αβ) = 0.
    #[error("bad frame: {reason}")]
    BadFrame { reason: String },

    /// A matrix has the wrong shape for its slot.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Subspace passed to a Φ-quotient is not contained in ker v_c.
    #[error("subspace at node {index} is not inside the kernel of v")]
    SubspaceNotInKernel { index: usize },

    /// An internal exactness check failed; a bug, not bad input.
    #[error("internal inconsistency: {context}")]
    InternalInconsistency { context: String },

    /// Fourier-Sato swap requires a single node at the origin.
    #[error("quiver is not supported at the single point 0: {context}")]
    NotSinglePointAtZero { context: String },

    /// The cover's derivative vanishes identically.
    #[error("degenerate cover: derivative is identically zero")]
    DegenerateCover,

    /// User-requested basepoint too close to a critical value.
    #[error("basepoint {basepoint} is within {min_distance} of critical value {value}")]
    BasepointTooClose {
        basepoint: String,
        value: String,
        min_distance: String,
    },

    /// Endpoint matching could not separate nearest from second-nearest root.
    #[error("continuation ambiguous: endpoint matching ratio {ratio:.3} < 10")]
    ContinuationAmbiguous { ratio: f64 },

    /// Two tracked roots collided; the path runs through a critical value.
    #[error("path passes through or too near a critical value (roots within {distance:e})")]
    PathThroughCriticalValue { distance: f64 },

    /// Newton corrector failed to converge within the iteration budget.
    #[error("no convergence: corrector failed at path parameter {t:.6}")]
    NoConvergence { t: f64 },

    /// No exact Gaussian-rational value available where one is required.
    #[error("critical value {value} does not snap to an exact Gaussian rational")]
    SnapFailed { value: String },

    /// Malformed document or malformed scalar text.
    #[error("parse error: {message}")]
    ParseError { message: String },
}

impl Error {
    pub fn parse(message: impl Into<String>) -> Self {
        Error::ParseError {
            message: message.into(),
        }
    }

    pub fn internal(context: impl Into<String>) -> Self {
        Error::InternalInconsistency {
            context: context.into(),
        }
    }

    pub fn dims(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }

    /// Exit code the CLI assigns to this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ParseError { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
