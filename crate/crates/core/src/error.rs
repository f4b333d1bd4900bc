use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The eigenvalue iteration hit its cap. `found` holds the eigenvalues
    /// that had already deflated.
    #[error("eigenvalue iteration did not converge ({} of {order} eigenvalues found)", found.len())]
    NoConvergence { order: usize, found: Vec<Complex64> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) | Error::NoConvergence { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
