use thiserror::Error;

use crate::model::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a sort attempt was abandoned. Each case proves at least one lie
/// within the attempt, so the caller restarts the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inconsistency {
    /// Median partition produced sides of the wrong size.
    PartitionSize {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The sort used more comparisons than any truthful run can.
    BudgetExceeded { limit: usize },
    /// A verification answer contradicted the claimed order.
    Contradiction { first: ElementId, second: ElementId },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid query: element {0} compared with itself")]
    InvalidQuery(ElementId),

    #[error("oracle told {lies} lies, budget was {budget}")]
    LieBudgetExceeded { lies: usize, budget: usize },

    #[error("{restarts} restarts exceed lie budget {k}; the oracle broke its contract")]
    BudgetViolation { restarts: usize, k: usize },

    #[error("{algorithm} returned a wrong extremum (trial seed {seed})")]
    WrongResult { algorithm: String, seed: u64 },

    #[error("inconsistent oracle answers: {0:?}")]
    Inconsistency(Inconsistency),

    #[error("vertex {vertex} out of range 1..={s}")]
    VertexOutOfRange { vertex: usize, s: usize },

    #[error("vertex {vertex} has {side} degree {degree} > {limit}")]
    DegreePrecondition {
        vertex: usize,
        side: &'static str,
        degree: usize,
        limit: usize,
    },

    #[error("exhaustive search limited to n <= {cap}, got n = {n}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<Inconsistency> for Error {
    fn from(value: Inconsistency) -> Self {
        Error::Inconsistency(value)
    }
}
