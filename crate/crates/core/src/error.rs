use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown problem `{0}`")]
    NotFound(String),

    /// A formula was evaluated outside its domain (zero denominator,
    /// non-positive radicand, negative discriminant).
    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("problem `{0}` has no exact solution")]
    MissingExact(String),

    #[error("problem `{id}` does not provide derivative of order {order}")]
    DerivativeUnavailable { id: String, order: u8 },

    #[error("interpolation solve failed: {0}")]
    Solve(String),

    #[error("non-finite value at step {step} (t = {t})")]
    NonFinite { step: usize, t: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
