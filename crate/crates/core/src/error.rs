use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quota fraction {0} outside [0.5, 1)")]
    InvalidQuota(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("coalition member {index} out of range for {players} players")]
    InvalidCoalition { index: usize, players: usize },

    #[error("game has no positive weight")]
    DegenerateGame,

    #[error("{players} players exceeds the enumeration cap of {cap}")]
    SizeLimit { players: usize, cap: usize },

    #[error("weights must be nonnegative integers for dynamic programming (got {0})")]
    NonIntegerWeights(f64),

    #[error("total weight {total} with {players} players exceeds the counting budget")]
    ArithmeticBudget { total: u64, players: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("distribution {0} has no density")]
    NoDensity(String),

    #[error("constituency size {0} must be a positive odd integer")]
    InvalidSize(u64),

    #[error("dimension mismatch: {what} has {got} entries, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
