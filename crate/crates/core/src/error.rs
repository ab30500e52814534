use thiserror::Error;

use crate::exactmath::MathError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mode index (l, m) = ({0}, {1})")]
    InvalidIndex(i64, i64),
    #[error("operation not available for case {0}")]
    UnsupportedCase(String),
    #[error("{what} for {case} does not match the table: derived {derived}, table {table}")]
    TableMismatch {
        case: String,
        what: String,
        derived: String,
        table: String,
    },
    #[error("point {0} is not a regular singular point")]
    NotRegularSingular(String),
    #[error("no bounds row for case {0}")]
    NoBoundsRow(String),
    #[error("ratio recurrence breaks down at n = {0}")]
    RatioBreakdown(usize),
    #[error("certificate {kind} failed for {case}: {detail}")]
    CertificateFailed { kind: String, case: String, detail: String },
    #[error("continued fraction step {0} dropped degree by more than one")]
    DegenerateDivision(usize),
    #[error("denominator sign could not be certified: {0}")]
    SignAmbiguousDenominator(String),
    #[error("case {0} is not certified")]
    NotCertified(String),
    #[error("{0}")]
    Io(String),
    #[error("malformed supplement file: {0}")]
    Parse(String),
    #[error(transparent)]
    Math(#[from] MathError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
