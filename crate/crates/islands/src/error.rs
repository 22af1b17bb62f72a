use thiserror::Error;

use crate::board::Region;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Board dimensions outside the supported range.
    #[error("degenerate board: {0}")]
    DegenerateBoard(String),

    /// Region out of bounds or not in the board's shape catalog.
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    /// Operation not defined for this board or input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Formula arguments outside the formula's domain.
    #[error("out of domain: {0}")]
    Domain(String),

    /// Malformed descriptor, height text, or JSON payload.
    #[error("parse error: {0}")]
    Parse(String),

    /// Operation requires a system that passes validation.
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// Height assignment did not reproduce the requested system.
    #[error("synthesis mismatch: {missing:?} not extracted, {extra:?} extracted unexpectedly")]
    SynthesisMismatch { missing: Vec<Region>, extra: Vec<Region> },

    /// A consistency check that must hold failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
