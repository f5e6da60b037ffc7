use thiserror::Error;

/// Errors reported by index construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("input of {0} symbols is too long to index")]
    InputTooLong(usize),
    #[error("empty pattern")]
    EmptyPattern,
    #[error("position {pos} out of range 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("label capacity {k} is smaller than universe size {n}")]
    LabelCapacity { n: usize, k: usize },
    #[error("invalid labels: {0}")]
    InvalidLabels(String),
    #[error("alpha {alpha} out of range 1..={n}")]
    AlphaOutOfRange { alpha: usize, n: usize },
    #[error("length range [{lo}, {hi}] is not within 1..={n}")]
    BadLengthRange { lo: usize, hi: usize, n: usize },
    #[error("locus does not name a non-empty factor")]
    EmptyFactor,
    #[error("every byte value occurs in the input; no interleaving symbol is available")]
    NoFreeSymbol,
}

pub type Result<T> = std::result::Result<T, Error>;
