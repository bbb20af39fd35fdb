use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^32")]
    InvalidModulus(u64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("operands live over different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("span center must be nonzero")]
    ZeroCenter,

    #[error("element is not in the span")]
    NotInSpan,

    #[error("generator set is empty")]
    EmptyGeneratorSet,

    #[error("invalid word length range {min}..={max}")]
    InvalidWordLength { min: usize, max: usize },

    #[error("could not sample {what} after {attempts} attempts")]
    SamplingFailed { what: &'static str, attempts: usize },

    #[error("fixture violates protocol assumptions: {0}")]
    FixtureViolation(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid attack plan: {0}")]
    InvalidPlan(String),

    #[error("attack failed at step {step} ({name}): {reason}")]
    AttackFailed {
        step: usize,
        name: String,
        reason: String,
    },

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
