use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("zero pivot encountered at row {row}")]
    SingularMatrix { row: usize },

    #[error("zero diagonal entry at row {row}")]
    SingularDiagonal { row: usize },

    #[error("mode index {k} outside {min}..={max}")]
    ModeOutOfRange { k: usize, min: usize, max: usize },

    #[error("invalid grid with {n} points: {reason}")]
    InvalidGrid { n: usize, reason: &'static str },

    #[error("grid with {n} points cannot be coarsened to {depth} levels")]
    Coarsening { n: usize, depth: usize },

    #[error("expected a two-level hierarchy, found {0} levels")]
    NotTwoLevel(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("invalid weight schedule: {0}")]
    InvalidSchedule(&'static str),

    #[error("power iteration seed is the zero vector")]
    ZeroSeed,

    #[error("non-finite entry")]
    NonFinite,

    #[error("two-grid eigenbasis is defective at mode {k}")]
    DefectiveBasis { k: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
