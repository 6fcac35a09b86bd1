use crate::space::Violation;

/// Errors raised by the library.
///
/// Data shortage (`Exhausted`, `TruncationExhausted`, `BudgetExceeded`) is kept
/// apart from logical failure so callers can tell a small truncation from a bug.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("the empty sequence has no rank")]
    EmptySequence,
    #[error("{entries:?} is not a non-decreasing sequence of length at most {k}")]
    InvalidSequence { entries: Vec<u64>, k: usize },
    #[error("level {level} exceeds node length {len}")]
    LevelOutOfRange { level: usize, len: usize },
    #[error("{0:?} is not a node of the top member")]
    MalformedNode(Vec<u64>),
    #[error("truncation holds {available} nodes but {needed} are required")]
    TruncationExhausted { needed: usize, available: usize },
    #[error("invalid approximation: {0}")]
    Invalid(Violation),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("supply exhausted at step {step}")]
    Exhausted { step: usize },
    #[error("search budget of {0} states exceeded")]
    BudgetExceeded(u64),
    #[error("ambiguous at this scale: {0}")]
    AmbiguousAtScale(String),
    #[error("no canonical form fits the data")]
    NotCanonicalAtScale,
    #[error("coloring has no value for {0}")]
    ColoringNotTotal(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

impl Error {
    /// True for failures caused by too little data or search budget.
    pub fn is_exhaustion(&self) -> bool {
        matches!(self, Error::Exhausted { .. } | Error::TruncationExhausted { .. } | Error::BudgetExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
