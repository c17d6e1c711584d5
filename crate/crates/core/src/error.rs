use thiserror::Error;

use crate::manifold::Manifold;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("expected {expected} coordinates on {manifold}, got {got}")]
    Dimension {
        manifold: Manifold,
        expected: usize,
        got: usize,
    },

    #[error("point {coords:?} is outside the domain of {manifold} (guard {guard})")]
    OutsideDomain {
        manifold: Manifold,
        coords: Vec<f64>,
        guard: f64,
    },

    #[error("{what} is defined on {expected}, not on {got}")]
    ManifoldMismatch {
        what: String,
        expected: Manifold,
        got: Manifold,
    },

    #[error("tangent vectors are based at different points")]
    BaseMismatch,

    #[error("finite-difference stencil leaves the domain of {manifold} along coordinate {axis}")]
    StencilExitsDomain { manifold: Manifold, axis: usize },

    #[error("degenerate plane: Gram determinant {gram:e}")]
    DegeneratePlane { gram: f64 },

    #[error("vector is not in the subbundle: {0}")]
    NotInSubbundle(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },

    #[error("shooting did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("singular linear system: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
