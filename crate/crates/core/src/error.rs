use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate is not finite: {0}")]
    NonFinite(String),

    #[error("route is not a permutation of 0..{n}: {reason}")]
    InvalidPermutation { n: usize, reason: String },

    #[error("instance has {n} collectibles, solver limit is {limit}")]
    SizeExceeded { n: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot summarize an empty sample")]
    EmptySample,
}
