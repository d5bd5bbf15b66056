use std::path::PathBuf;

use thiserror::Error;

use crate::dataset::YearMonth;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("missing mandatory column `{column}` in {path}")]
    MissingColumn { path: PathBuf, column: &'static str },

    #[error("duplicate record for customer `{customer_id}` in month {month}")]
    DuplicateRecord { customer_id: String, month: YearMonth },

    #[error("invalid key value `{value}` in column `{column}` (row {row})")]
    InvalidKey {
        column: &'static str,
        value: String,
        row: usize,
    },

    #[error("invalid year-month `{0}`")]
    InvalidMonth(String),

    #[error("field `{0}` is entirely null in the statistics source")]
    AllNull(&'static str),

    #[error("statistics source is empty")]
    EmptyStatsSource,

    #[error("month {0} is not available")]
    MissingMonth(YearMonth),

    #[error("empty neighbor pool")]
    EmptyPool,

    #[error("need at least {needed} minority examples, found {found}")]
    TooFewMinority { needed: usize, found: usize },

    #[error("need at least {needed} other rows for neighbor search, found {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("dataset contains a single class")]
    SingleClass,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: {left} predictions vs {right} labels")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("all class counts are zero")]
    ZeroCounts,

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("malformed model file at line {line}: {msg}")]
    ModelFormat { line: usize, msg: String },

    #[error("malformed report: {0}")]
    ReportFormat(String),

    #[error("malformed config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
