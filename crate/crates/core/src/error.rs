use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern {index} is empty")]
    InvalidPattern { index: usize },

    #[error("pattern set is empty")]
    EmptyPatternSet,

    #[error("window size must be at least 1")]
    ZeroWindow,

    #[error("node {node} out of range 1..={k}")]
    NodeOutOfRange { node: usize, k: usize },

    #[error("pattern index {index} out of range (q = {q})")]
    PatternOutOfRange { index: usize, q: usize },

    #[error("expected {expected} block values, got {got}")]
    BlockCountMismatch { expected: usize, got: usize },

    #[error("block {block} value {value} does not fit in {omega} bits")]
    BlockValueOutOfRange { block: usize, value: u64, omega: u32 },

    #[error("overflow bit set in block {block}")]
    CorruptState { block: usize },

    #[error("state needs {width} bits but the backend holds at most {capacity}")]
    WidthExceeded { width: usize, capacity: usize },
}
