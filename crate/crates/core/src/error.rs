use thiserror::Error;

use crate::family::Subset;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pattern size {0} out of range (must be 1..={max})", max = crate::pattern::MAX_PATTERN_SIZE)]
    PatternSize(usize),

    #[error("hypercube dimension {0} out of range (must be 1..=4)")]
    HypercubeDimension(usize),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("ground size {0} out of range (must be 1..={max})", max = crate::family::MAX_GROUND)]
    GroundSize(usize),

    #[error("element {element} out of range for ground size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate set")]
    DuplicateSet { line: usize },

    #[error("set {0:?} is already a member of the family")]
    AlreadyMember(Subset),

    #[error("family is not free of the pattern")]
    NotFree,

    #[error("{what}: n = {n} exceeds cap {cap}")]
    OverCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("{0}")]
    Range(String),

    #[error("input must be nonempty")]
    EmptyInput,

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
