use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("position {z} mm outside domain [{lo}, {hi}] mm")]
    Domain { z: f64, lo: f64, hi: f64 },

    #[error("mixing angle undefined: both couplings vanish")]
    UndefinedAngle,

    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("initial state not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("non-finite value during integration at step {step}")]
    NumericalFailure { step: usize },

    #[error("undepleted-reference regime violated: |A-|/|A_p| = {ratio} < 10")]
    Regime { ratio: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid { field, reason: reason.into() }
    }
}
