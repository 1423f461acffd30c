use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {value} is outside the domain (0, ∞)")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: String, reason: String },

    #[error("points {0} and {1} coincide; the Λ-matrix needs distinct centres")]
    CoincidentPoints(usize, usize),

    #[error("matrix entry ({0}, {1}) is not finite")]
    NonFinite(usize, usize),

    #[error("no near-null direction at E = {energy:e}: smallest |λ| = {smallest:e}")]
    StaleRoot { energy: f64, smallest: f64 },

    #[error("no root in bracket: {0}")]
    NoRoot(String),

    #[error("eigensolver failed: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parameter { field: field.into(), reason: reason.into() }
    }
}
