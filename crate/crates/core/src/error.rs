use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh specification: {0}")]
    InvalidSpec(String),

    #[error("non-conforming mesh: {0}")]
    Conformity(String),

    #[error("point {0:?} lies outside the mesh")]
    OutOfDomain(Vec<f64>),

    #[error("unsupported quadrature request: {0}")]
    Capability(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("time step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("{0} is not available in {1}D")]
    UnsupportedDimension(&'static str, usize),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True when the failure (possibly wrapped in a step error) is a Newton breakdown.
    pub fn is_nonconvergence(&self) -> bool {
        match self {
            Error::NonConvergence { .. } | Error::Singular(_) => true,
            Error::Step { source, .. } => source.is_nonconvergence(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
