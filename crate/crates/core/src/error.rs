use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("non-finite value {value} at position {position}")]
    NonFinite { position: usize, value: f64 },

    /// The regressor has (numerically) zero spread, so the closed-form
    /// slope would divide by zero.
    #[error(
        "degenerate regressor: sum of squared deviations {sxx:e} is below threshold {threshold:e}"
    )]
    DegenerateRegressor { sxx: f64, threshold: f64 },

    #[error("singular system: pivot {pivot:e} at step {step} is below threshold {threshold:e}")]
    SingularSystem {
        step: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("trial {trial} failed: {source}")]
    TrialFailed {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("trial {trial}: solver discrepancy {discrepancy:e} exceeds tolerance {tolerance:e}")]
    Discrepancy {
        trial: usize,
        discrepancy: f64,
        tolerance: f64,
    },
}

impl Error {
    /// True for failures caused by numerically degenerate input rather than
    /// malformed input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::DegenerateRegressor { .. }
            | Error::SingularSystem { .. }
            | Error::Discrepancy { .. } => true,
            Error::TrialFailed { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
