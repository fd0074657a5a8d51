use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested value cannot be produced at a trustworthy accuracy
    /// (catastrophic cancellation, precision cap exceeded, ...).
    #[error("numerical stability error: {0}")]
    Stability(String),

    /// An iterative solver or adaptive quadrature failed to converge.
    #[error("no convergence: {0} (last residual {residual:.3e})", residual = .1)]
    NoConvergence(String, f64),

    /// A truncated bilateral series was given a window too small for the
    /// requested tolerance.
    #[error("window too small: tail bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    WindowTooSmall { bound: f64, tol: f64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn stability(msg: impl Into<String>) -> Self {
        Error::Stability(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Stability(_) | Error::NoConvergence(..) | Error::WindowTooSmall { .. } => 3,
        }
    }
}
