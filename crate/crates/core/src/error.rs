use thiserror::Error;

/// Errors produced by the engine.
///
/// Structured non-success outcomes such as a stalled rank sequence are not
/// errors; they are reported through the result types of the operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series stores {have} coefficients but {need} are required")]
    TruncationTooShort { need: usize, have: usize },

    #[error("evaluation radius {r} must lie strictly inside the radius of analyticity {radius}")]
    RadiusOutOfRange { r: String, radius: String },

    #[error("power table covers powers <= {have_power} and orders <= {have_order}, but powers <= {need_power} and orders <= {need_order} are required")]
    TableTooSmall {
        need_power: usize,
        need_order: usize,
        have_power: usize,
        have_order: usize,
    },

    #[error("matrix has rank {rank}, but a nonzero minor of size {size} was requested")]
    RankDeficient { rank: usize, size: usize },

    #[error("lacunarity violated at k = {index}: {reason}")]
    LacunarityViolation { index: usize, reason: String },

    #[error("{0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    #[error("malformed rational {0:?}")]
    ParseRational(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when retrying with a longer truncation or higher precision may succeed.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            Error::TruncationTooShort { .. } | Error::PrecisionInsufficient(_) | Error::TableTooSmall { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
