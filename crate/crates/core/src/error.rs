use thiserror::Error;

/// Every failure the library reports. Undecided outcomes are errors, never defaults.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("vector not in the domain: {0}")]
    NotInDomain(String),
    #[error("modulus cannot be bounded on the tail: {0}")]
    UnboundedTail(String),
    #[error("undecided: {reason}")]
    Undecided {
        reason: String,
        /// `(N, S_N)` checkpoints of the partial sums that were inspected.
        partial_sums: Vec<(usize, f64)>,
    },
    #[error("initial vector not admissible{}: {reason}", t.map(|t| format!(" at t = {t}")).unwrap_or_default())]
    NotAdmissible { t: Option<f64>, reason: String },
    #[error("regression window [{lo}, {hi}] is narrower than 4")]
    WindowTooSmall { lo: usize, hi: usize },
    #[error("beta = {0} outside the admissible range")]
    BetaOutOfRange(f64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("sector undefined: {0}")]
    UndefinedSector(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("inconclusive divergence at s = {s}: {reason}")]
    InconclusiveDivergence { s: f64, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
