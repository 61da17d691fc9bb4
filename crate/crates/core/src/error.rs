use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular matrix (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("non-invertible coupling: det(I - F G / 4) = {margin:e}, det(coupling map) = {jacobian:e}")]
    NonInvertibleCoupling { margin: f64, jacobian: f64 },

    #[error("operation requires constant F and G fields")]
    NonConstantFields,

    #[error("degenerate orbit: det(Omega) = {det:e}")]
    DegenerateOrbit { det: f64 },

    #[error("Casimir undefined: {0}")]
    CasimirUndefined(String),

    #[error("synchronization violated: {lhs_name} = {lhs} but {rhs_name} = {rhs}")]
    SynchronizationViolated {
        lhs_name: &'static str,
        lhs: f64,
        rhs_name: &'static str,
        rhs: f64,
    },

    #[error("non-finite state at t = {t}")]
    StepRejected { t: f64 },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
