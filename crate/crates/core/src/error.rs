use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: element has {got} coordinates, spec expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported group type/rank: {0}")]
    UnsupportedType(String),
    #[error("invalid weight function: {0}")]
    InvalidWeight(String),
    #[error("parabolic subgroup on {0} generators is infinite")]
    InfiniteParabolic(String),
    #[error("element is not in the lowest two-sided cell")]
    NotInLowestCell,
    #[error("strip query for a direction of zero weight")]
    ZeroWeightDirection,
    #[error("ball of radius {0} is too small to certify the answer")]
    BallTooSmall(usize),
    #[error("claim hypotheses not met: {0}")]
    ClaimHypothesis(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
