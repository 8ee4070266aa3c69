//! Error type shared by all geometry operations.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, GeomError>;

/// Errors raised by construction and geometry operations.
#[derive(Debug, Clone, PartialEq)]
pub enum GeomError {
    /// Input matrix is not square.
    NotSquare { rows: usize, cols: usize },
    /// Two arguments disagree in dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Relative asymmetry above the construction tolerance.
    NonSymmetric { asymmetry: f64 },
    /// NaN or infinite entry.
    NonFinite,
    /// Matrix is not positive definite at the working tolerance.
    NonSpdInput { min_eig: f64, max_eig: f64 },
    /// A diagonal entry differs from 1 where a correlation matrix is required.
    NotUnitDiagonal { index: usize, value: f64 },
    /// A diagonal entry differs from 0 where a hollow matrix is required.
    NonHollowDiagonal { index: usize, value: f64 },
    /// Correlation entry on or numerically at the boundary of (-1, 1).
    OutsideOpenElliptope { row: usize, col: usize, value: f64 },
    /// Entry is zero or negative where strict positivity is required.
    NonPositiveEntry { index: usize, value: f64 },
    /// Metric parameters violate alpha > 0 or beta > -alpha/n.
    InvalidMetricParams { alpha: f64, beta: f64, dim: usize },
    /// Symmetric eigensolver did not converge.
    EigFailure,
    /// A linear system that should be regular was numerically singular.
    LinearSolveFailure,
    /// Sectional curvature requested for a degenerate 2-plane.
    DegeneratePlane { gram: f64 },
    /// Operation needs a larger matrix dimension.
    DimensionTooSmall { dim: usize, required: usize },
    /// Tangent vector failed the horizontality certificate.
    NotHorizontal { residual: f64 },
    /// Fiber optimization stopped above the horizontality tolerance.
    NoConvergence { iterations: usize, residual: f64 },
    /// Straight-line interpolation left the positive definite cone.
    NonSpdResult,
    /// Scalar argument outside its domain.
    OutOfDomain { value: f64 },
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            GeomError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            GeomError::NonSymmetric { asymmetry } => {
                write!(f, "matrix is not symmetric (relative asymmetry {asymmetry:.3e})")
            }
            GeomError::NonFinite => write!(f, "matrix has NaN or infinite entries"),
            GeomError::NonSpdInput { min_eig, max_eig } => write!(
                f,
                "matrix is not positive definite (eigenvalue range [{min_eig:.3e}, {max_eig:.3e}])"
            ),
            GeomError::NotUnitDiagonal { index, value } => {
                write!(f, "diagonal entry {index} is {value}, expected 1")
            }
            GeomError::NonHollowDiagonal { index, value } => {
                write!(f, "diagonal entry {index} is {value}, expected 0")
            }
            GeomError::OutsideOpenElliptope { row, col, value } => write!(
                f,
                "correlation entry ({row}, {col}) = {value} is outside the open interval (-1, 1)"
            ),
            GeomError::NonPositiveEntry { index, value } => {
                write!(f, "entry {index} is {value}, expected > 0")
            }
            GeomError::InvalidMetricParams { alpha, beta, dim } => write!(
                f,
                "metric parameters (alpha={alpha}, beta={beta}) invalid for dimension {dim}: need alpha > 0 and beta > -alpha/n"
            ),
            GeomError::EigFailure => write!(f, "symmetric eigendecomposition failed to converge"),
            GeomError::LinearSolveFailure => write!(f, "linear solve failed: singular system"),
            GeomError::DegeneratePlane { gram } => {
                write!(f, "tangent vectors span a degenerate plane (gram determinant {gram:.3e})")
            }
            GeomError::DimensionTooSmall { dim, required } => {
                write!(f, "dimension {dim} too small, operation requires n >= {required}")
            }
            GeomError::NotHorizontal { residual } => {
                write!(f, "vector fails the horizontality certificate (residual {residual:.3e})")
            }
            GeomError::NoConvergence { iterations, residual } => write!(
                f,
                "fiber optimization did not converge after {iterations} iterations (horizontality residual {residual:.3e})"
            ),
            GeomError::NonSpdResult => {
                write!(f, "interpolation left the positive definite cone")
            }
            GeomError::OutOfDomain { value } => {
                write!(f, "scalar argument {value} outside its domain")
            }
        }
    }
}

impl std::error::Error for GeomError {}
