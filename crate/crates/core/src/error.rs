use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size n = {n} is out of range (expected 1 <= n <= {max})")]
    UniverseOutOfRange { n: usize, max: usize },

    #[error("universe size mismatch: left code has n = {left}, right code has n = {right}")]
    UniverseMismatch { left: usize, right: usize },

    #[error("index {index} is outside the universe [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("code is missing the empty codeword (strict mode)")]
    MissingEmptyWord,

    #[error("codeword {word} of the downward set is not in the ambient set")]
    NotInAmbient { word: String },

    #[error("word set is not downward closed: {missing} lies below {word} but is missing")]
    NotDownwardClosed { word: String, missing: String },

    #[error("realization has no boxes")]
    EmptyRealization,

    #[error("ambient dimension must be positive")]
    ZeroDimension,

    #[error("box {index} has {found} intervals, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("interval [{lo}, {hi}] has lo > hi")]
    InvertedInterval { lo: String, hi: String },

    #[error("operation expects a 1-dimensional realization, got dimension {dim}")]
    NotOneDimensional { dim: usize },

    #[error("realizations disagree on the number of boxes: {left} vs {right}")]
    BoxCountMismatch { left: usize, right: usize },

    #[error("endpoint {value} is not an integer")]
    NonIntegerEndpoint { value: String },

    #[error("full interval-code enumeration is capped at n <= {cap} (got n = {n}); use is_interval_code instead")]
    EnumerationCap { n: usize, cap: usize },

    #[error("closure over all interval codes is capped at n <= {cap} (got n = {n}); supply generators or use an anchored query")]
    ClosureCap { n: usize, cap: usize },

    #[error("anchored search is capped at n <= {cap} (got n = {n})")]
    AnchoredCap { n: usize, cap: usize },

    #[error("anchored search needs the full word [{n}] in the code")]
    NotAnchored { n: usize },

    #[error("anchored search would examine {candidates} candidate subcodes (limit {limit})")]
    AnchoredTooLarge { candidates: u128, limit: u128 },

    #[error("sunflower size must be a positive even integer, got {n}")]
    BadSunflowerSize { n: usize },

    #[error("unknown named code {0:?}")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
