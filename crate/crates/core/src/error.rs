// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors surfaced by the segmentation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input data rejected at construction time (empty, non-finite, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The request would need more memory than the solver is willing to allocate.
    #[error("problem too large: {0}")]
    TooLarge(String),
    /// The exhaustive oracle refuses inputs past its length limit.
    #[error("oracle refused: n = {n} exceeds limit {limit}")]
    OracleLimit { n: usize, limit: usize },
    /// Functional-pruning state failed its own invariants.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
