use thiserror::Error;

use crate::words::GroupContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch {
        left: GroupContext,
        right: GroupContext,
    },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("expected {expected} images, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid rank {0}")]
    InvalidRank(usize),

    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u32),

    #[error("word `{0}` is not conjugate to a generator or its inverse")]
    NotConjugateOfGenerator(String),

    #[error("word has odd length {0}; expected an even word")]
    OddLength(usize),

    #[error("operation requires a {0} context")]
    WrongContext(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inverse unavailable: automorphism has no source word and the solver bound was exhausted")]
    InverseUnavailable,

    #[error("search bound exceeded: needed {needed}, cap {cap}")]
    BoundExceeded { needed: u64, cap: u64 },

    #[error("invalid fold: {0}")]
    InvalidFold(String),

    #[error("conjugating powers are not constant on the component containing label {0}")]
    NonConstantTheta(usize),

    #[error("letter `{0}` is not an A-letter; a pure word was expected")]
    NotPure(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::ContextMismatch { .. } => "context-mismatch",
            Error::RankMismatch { .. } => "rank-mismatch",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::InvalidRank(_) => "invalid-rank",
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::NotConjugateOfGenerator(_) => "not-conjugate-of-generator",
            Error::OddLength(_) => "odd-length",
            Error::WrongContext(_) => "wrong-context",
            Error::Parse(_) => "parse",
            Error::InverseUnavailable => "inverse-unavailable",
            Error::BoundExceeded { .. } => "bound-exceeded",
            Error::InvalidFold(_) => "invalid-fold",
            Error::NonConstantTheta(_) => "non-constant-theta",
            Error::NotPure(_) => "not-pure",
            Error::InvalidTree(_) => "invalid-tree",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
