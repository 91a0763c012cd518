//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by substitution, restriction, operator and input-parsing code.
///
/// Pure algebra (polynomial and rational-function arithmetic) is total and
/// never returns these; they appear where an external contract can be violated
/// (a substitution killing a denominator, a malformed JSON input, a level
/// entry pointing at a nonexistent block).
#[derive(Debug, Error)]
pub enum Error {
    /// A denominator factor became the zero polynomial under a substitution.
    #[error("denominator factor vanishes under substitution: {factor}")]
    DenominatorVanishes { factor: String },

    /// A difference operator was applied to a series of a different rank.
    #[error("rank mismatch: operator rank {op}, series rank {series}")]
    RankMismatch { op: usize, series: usize },

    /// The diagonal part of the eigen-recursion vanished where it must not.
    /// With symbolic determinant classes this cannot happen at nonzero
    /// degree; surfacing it is a correctness tripwire, not a recoverable state.
    #[error("degenerate recursion bracket at degree {d:?}")]
    DegenerateBracket { d: Vec<u32> },

    /// A level entry references a block outside `1..=rank`.
    #[error("level entry references block {i}, valid blocks are 1..={max}")]
    BadLevelIndex { i: u32, max: u32 },

    /// Weight data references block slots that do not exist.
    #[error("inconsistent weight data: {0}")]
    InconsistentData(String),

    /// An expression contains a variable the requested map is not defined on.
    #[error("variable {0} is not supported here")]
    UnsupportedVariable(String),

    /// Malformed user-facing input (CLI argument or JSON document).
    #[error("invalid {what}: {msg}")]
    Invalid { what: &'static str, msg: String },
}

impl Error {
    pub fn invalid(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Invalid { what, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
