use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state blew up at t = {t}: component magnitude exceeded {limit:e}")]
    BlowUp { t: f64, limit: f64 },

    #[error("invariant measure singular or non-positive near v = {0:?}")]
    MeasureSingular(Vec<f64>),

    #[error("time step {dt:e} violates the stability bound {bound:e}")]
    UnstableStep { dt: f64, bound: f64 },

    #[error("discrete mass drifted by {drift:e} (tolerance {tol:e}) at t = {t}")]
    MassDrift { drift: f64, tol: f64, t: f64 },

    #[error("no convergence after {iters} iterations (best residual {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("model file: {0}")]
    ModelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a running computation (as opposed to bad inputs).
    pub fn is_runtime(&self) -> bool {
        matches!(
            self,
            Error::BlowUp { .. }
                | Error::NoConvergence { .. }
                | Error::MassDrift { .. }
                | Error::UnstableStep { .. }
        )
    }
}
