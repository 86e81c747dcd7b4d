use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("arm {arm} is outside 1..={k}")]
    InvalidArm { arm: usize, k: usize },

    #[error("bid {0} is outside [0, 1]")]
    InvalidBid(f64),

    #[error("feedback contract violated: {0}")]
    Feedback(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// A zero gap sits strictly before the best arm in the sorted gap prefix.
    #[error("degenerate gap: sorted gap {position} is zero before the best arm")]
    DegenerateGap { position: usize },

    #[error("oracle search space too large: {0}")]
    OracleTooLarge(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than a failed run.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidInstance(_)
                | Error::InvalidArm { .. }
                | Error::InvalidBid(_)
                | Error::Config(_)
                | Error::Precondition(_)
        )
    }
}
