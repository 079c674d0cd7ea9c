use thiserror::Error;

/// Errors shared by every solver layer of the crate.
#[derive(Debug, Error)]
pub enum QballError {
    /// An input violated a documented precondition (negative field, ε out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Frequency outside the bound-state window ω ∈ (0, 1).
    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// Argument outside the range an algorithm can evaluate without overflow.
    #[error("range error: {0}")]
    Range(String),

    /// A bracketing scan found no sign change for a root.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// Quadrature or an iterative solver failed to reach its tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Self-consistent iteration ran out of iterations; carries the residual history.
    #[error("solver did not converge after {iterations} iterations (last residual {last_residual:.3e})")]
    NonConvergence {
        iterations: usize,
        last_residual: f64,
        history: Vec<f64>,
    },

    /// A parameter set that is syntactically valid but physically inconsistent
    /// (e.g. the exterior Riccati pole lands inside the exterior domain).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QballError>;
