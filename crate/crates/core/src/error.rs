//! Error type shared by all operations in this crate.

use thiserror::Error;

/// Errors reported by configuration, moment, and verification operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point or vector does not match the ambient dimension of a structure.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two grids or vectors have incompatible shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The barycenter is requested for a system with zero total weight.
    #[error("total weight is zero; barycenter undefined")]
    ZeroTotalWeight,

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The operation is not available in the current scalar mode.
    #[error("unsupported in {mode} mode: {reason}")]
    ModeUnsupported { mode: &'static str, reason: String },

    /// The supplied index set does not span a full-dimensional simplex.
    #[error("index set {0:?} is not a core of the configuration")]
    NotACore(Vec<usize>),

    /// The configuration codimension differs from what the operation requires.
    #[error("wrong codimension: expected {expected}, got {got}")]
    WrongCodimension { expected: usize, got: usize },

    /// A volume was requested in a frame whose ambient dimension does not
    /// make the subconfiguration matrix square.
    #[error("frame mismatch: {points} points in ambient dimension {ambient}; volume needs ambient = points - 1")]
    FrameMismatch { points: usize, ambient: usize },

    /// The reference simplex volume vanishes, so the identities are degenerate.
    #[error("degenerate frame: reference volume is zero")]
    DegenerateFrame,

    /// The input has the wrong number of points or wrong dimension for the operation.
    #[error("wrong shape: {0}")]
    WrongShape(String),

    /// A matrix column that must lie in the kernel does not.
    #[error("column {column} is not in the kernel of the configuration matrix")]
    ColumnNotInKernel { column: usize },

    /// A matrix required to be symmetric is not.
    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },

    /// A weight matrix required to be symmetric is not.
    #[error("weight matrix is not symmetric")]
    AsymmetricInput,

    /// Two points of the configuration coincide where distinctness is required.
    #[error("points {i} and {j} coincide")]
    CoincidentPoints { i: usize, j: usize },

    /// Iterative solve did not converge within the iteration budget.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    MaxIterations { iterations: usize, residual: f64 },

    /// The solver hit a (numerically) singular Jacobian.
    #[error("singular Jacobian encountered")]
    SingularJacobian,

    /// An integer argument lies outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
