use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the range the formulas are defined on.
    #[error("{0}")]
    Domain(String),

    /// A custom schedule produced a non-finite value.
    #[error("schedule evaluation failed at s = {s}: {detail}")]
    Evaluation { s: f64, detail: String },

    /// A dense or ensemble computation was asked for a dimension outside its guard.
    #[error("{0}")]
    Size(String),

    /// Time integration produced non-finite amplitudes or lost unitarity.
    #[error("integration failed at step {step}: {detail}")]
    Integration { step: usize, detail: String },

    /// An internal invariant was violated (should not happen for valid inputs).
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
