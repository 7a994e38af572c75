use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("entry count {len} does not match a {rows}x{cols} matrix")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for size {bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("index tuple {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),

    #[error("exterior power level {k} out of range for dimension {d}")]
    LevelOutOfRange { k: usize, d: usize },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("C_{k} has a non-integral entry at ({row}, {col})")]
    NonIntegralCk { k: usize, row: usize, col: usize },

    #[error("capacity exceeded: binomial(d, d/2) = {needed} > limit {limit}")]
    CapacityExceeded { needed: u128, limit: u128 },

    #[error("F must be a positive diagonal matrix: {0}")]
    NotPositiveDiagonal(String),

    #[error("1 is an eigenvalue of G")]
    EigenvalueOne,

    #[error("monomial structure violated: {0}")]
    StructureViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable variant name used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape { .. } => "Shape",
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotIncreasing(_) => "NotIncreasing",
            Error::LevelOutOfRange { .. } => "LevelOutOfRange",
            Error::SingularInput(_) => "SingularInput",
            Error::NonIntegralCk { .. } => "NonIntegralCk",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::NotPositiveDiagonal(_) => "NotPositiveDiagonal",
            Error::EigenvalueOne => "EigenvalueOne",
            Error::StructureViolation(_) => "StructureViolation",
            Error::Parse(_) => "ParseError",
        }
    }
}
