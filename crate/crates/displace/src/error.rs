//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when estimating, simulating, or scoring.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Every regression coefficient is nonpositive, so the clipped sum is
    /// zero and no probability vector can be formed.
    #[error("all coefficients are nonpositive; nothing to normalize")]
    AllNonpositive,

    /// Two sequences that must be aligned have different lengths.
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// A vector that must be a probability vector is not one.
    #[error("not a probability vector: {0}")]
    NotNormalized(String),

    /// The source-event counts sum to zero, so no conversion rate exists.
    #[error("source event counts sum to zero")]
    ZeroSourceEvents,

    /// The count series is shorter than one full lag window.
    #[error("series has {len} intervals but a lag window needs {needed}")]
    TooShort { len: usize, needed: usize },

    /// The design matrix has linearly dependent columns.
    #[error("design matrix is rank deficient (rank {rank} of {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    /// The active-set iteration hit its iteration cap.
    #[error("constrained solver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// The constrained problem is infeasible as posed.
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    /// The interval length does not divide a 60-minute hour, so the arrival
    /// intensity is not constant within every interval.
    #[error("interval length {ell} min does not divide a 60-minute hour")]
    EllDoesNotDivideHour { ell: f64 },

    /// The displacement distribution extends past the last lag interval.
    #[error("distribution support ends at {support_end} min but the lag window covers only [0, {limit}]")]
    SupportExceedsLags { support_end: f64, limit: f64 },

    /// The atom list for a discrete within-interval distribution is invalid.
    #[error("invalid atom list: {0}")]
    InvalidAtoms(String),

    /// The experiment grid has no cells.
    #[error("experiment grid has no cells")]
    EmptyGrid,

    /// A constructor argument violates a documented invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable short name of the error condition, for CLI messages and logs.
    pub fn name(&self) -> &'static str {
        match self {
            Error::AllNonpositive => "AllNonpositive",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NotNormalized(_) => "NotNormalized",
            Error::ZeroSourceEvents => "ZeroSourceEvents",
            Error::TooShort { .. } => "TooShort",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::InfeasibleInput(_) => "InfeasibleInput",
            Error::EllDoesNotDivideHour { .. } => "EllDoesNotDivideHour",
            Error::SupportExceedsLags { .. } => "SupportExceedsLags",
            Error::InvalidAtoms(_) => "InvalidAtoms",
            Error::EmptyGrid => "EmptyGrid",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
