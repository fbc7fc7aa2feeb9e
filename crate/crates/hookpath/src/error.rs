use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("hooks of sizes {0} and {1} are incomparable")]
    SizeMismatch(u64, u64),
    #[error("invalid hook: {0}")]
    InvalidHook(String),
    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i128,
        range: String,
    },
    #[error("floor {floor} exceeds the configured bound {max}")]
    FloorOutOfRange { floor: u32, max: u32 },
    #[error("vertex on floor {0} has no predecessors")]
    NoPredecessors(u32),
    #[error("inconsistent path: {0}")]
    InconsistentPath(String),
    #[error("block comparison is only defined above position 2, got {0} and {1}")]
    ConventionPosition(u32, u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("index {l} is not covered by any printed case ({context})")]
    Uncovered { l: u64, context: String },
    #[error("non-integral series coefficient at term {0}")]
    NonIntegral(usize),
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: impl Into<i128>, range: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        value: value.into(),
        range: range.into(),
    }
}
