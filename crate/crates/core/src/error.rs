use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("channel is not symmetric")]
    NotSymmetric,

    #[error("length {got} does not match expected {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("field elements belong to different fields")]
    ModulusMismatch,

    #[error("zero field element is not invertible")]
    ZeroElement,

    #[error("seed block decoded to the zero element")]
    SeedDecodeFailure,

    #[error("enumeration of {0} joint states exceeds the budget")]
    EnumerationBudget(u128),

    #[error("generator stack is rank deficient")]
    RankDeficient,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
