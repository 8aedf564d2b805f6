use thiserror::Error;

use crate::charmat::ValidationReport;

/// Errors produced by the library.
///
/// The CLI maps these onto process exit codes, so the variants mirror the
/// failure classes a caller can act on: bad input syntax, semantics that
/// fail validation, domain preconditions, and resource caps.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: out-of-range labels, non-antichain face lists,
    /// unparsable files.
    #[error("input error: {0}")]
    Input(String),

    /// A precondition of an operation does not hold (e.g. the queried
    /// simplex is not a face of the complex).
    #[error("domain error: {0}")]
    Domain(String),

    /// The characteristic matrix failed the non-degeneracy check.
    #[error("{0}")]
    Validation(Box<ValidationReport>),

    /// Enumerating the row space would exceed the configured cap.
    #[error("resource cap exceeded: rank {rank} requires {needed} row-space vectors (cap allows 2^{cap})")]
    RankCap {
        rank: usize,
        needed: u128,
        cap: usize,
    },

    /// Two routes that must agree (h-vector vs. face-ring dimensions)
    /// disagreed on data that should be consistent.
    #[error("data error: {0}")]
    Data(String),

    /// An internal consistency assertion failed; indicates a bug, not
    /// bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
