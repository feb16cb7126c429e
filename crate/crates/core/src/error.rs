use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// `omega_p - H` is singular to working precision.
    #[error("singular system at probe frequency {omega_p:.9e} rad/s; shift the probe by an infinitesimal amount")]
    Singular { omega_p: f64 },

    #[error("mode sum is ill-conditioned ({flagged} near-degenerate modes); use the resolvent method")]
    IllConditioned { flagged: usize },

    #[error("analysis error: {0}")]
    Analysis(String),

    #[error("no band: |y| - 1 does not change sign in the bracket")]
    NoBand,

    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
