use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a scalar: {reason}")]
pub struct ParseValueError {
    pub input: String,
    pub reason: String,
}

impl ParseValueError {
    pub fn new(input: &str, reason: &str) -> Self {
        ParseValueError {
            input: input.to_owned(),
            reason: reason.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A floating point rank or dependence decision landed inside the
    /// ambiguity band around the threshold.
    #[error("numerically ambiguous {context}: relative singular value {value:.3e} is too close to eps_rank {threshold:.1e}")]
    Ambiguous {
        context: &'static str,
        value: f64,
        threshold: f64,
    },
    #[error("spectrum leaves the Gaussian rationals (characteristic polynomial {poly}); supply a Jordan presentation or use approximate mode")]
    IrrationalSpectrum { poly: String },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("invalid tolerance frame: {0}")]
    InvalidTolerance(String),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("incompatible operands {left} and {right}: {reason}")]
    Incompatible {
        left: String,
        right: String,
        reason: String,
    },
    #[error("not representable in this operator class: {0}")]
    Unrepresentable(String),
    #[error("perturbation has no power of finite rank: {0}")]
    NotFiniteRank(String),
    /// A set relation needed for the answer came out undecided.
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("perturbation does not commute with the operator: {0}")]
    NonCommuting(String),
}

impl Error {
    pub fn is_ambiguity(&self) -> bool {
        matches!(self, Error::Ambiguous { .. } | Error::Undecided(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
