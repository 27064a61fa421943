use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter violates its domain. `name` is the parameter key
    /// (`g`, `omega_a`, `t_hot`, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("hot temperature {t_hot} must exceed cold temperature {t_cold}")]
    TemperatureOrder { t_hot: f64, t_cold: f64 },

    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("matrix dimension {dim} outside supported range 1..={max}")]
    Dimension { dim: usize, max: usize },

    #[error("{routine} did not converge after {sweeps} sweeps")]
    NotConverged {
        routine: &'static str,
        sweeps: usize,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("state is not X-shaped (off-X entry {magnitude:e}); use the general concurrence")]
    NotXState { magnitude: f64 },

    #[error("input is not normalized: {0}")]
    Unnormalized(String),

    #[error("grid is empty")]
    EmptyGrid,

    #[error("grid must be ascending (index {index})")]
    UnsortedGrid { index: usize },

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
