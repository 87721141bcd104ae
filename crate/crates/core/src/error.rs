use std::path::PathBuf;

use crate::calendar::YearMonth;

/// Errors raised anywhere in the synchronization pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// A malformed input file. `row` is the 1-based data row (the header is row 0).
    #[error("ingestion error at row {row}, column '{column}': {message}")]
    Ingest {
        row: usize,
        column: String,
        message: String,
    },

    #[error("ingestion error: non-consecutive calendar at row {row}: expected {expected}, found {found}")]
    NonConsecutive {
        row: usize,
        expected: YearMonth,
        found: YearMonth,
    },

    #[error("invalid date '{0}': expected YYYY-MM")]
    InvalidDate(String),

    #[error("invalid band (k_l={lower}, k_u={upper}) for N={len}: need 1 <= k_l <= k_u <= {max}", max = len / 2)]
    InvalidBand { lower: usize, upper: usize, len: usize },

    #[error("invalid band (k_l={lower}, k_u={upper}): need 1 <= k_l <= k_u")]
    InvalidCutoffs { lower: usize, upper: usize },

    #[error("invalid periods (longest={longest}, shortest={shortest}) for N={len}: need 2 <= shortest <= longest <= N")]
    InvalidPeriods { longest: f64, shortest: f64, len: usize },

    #[error("invalid window W={0}: must be odd and >= 3")]
    InvalidWindow(usize),

    #[error("series too short: need {needed} points, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate phase at t={t}: amplitude {amplitude:e} below floor {floor:e}")]
    DegeneratePhase { t: usize, amplitude: f64, floor: f64 },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid panel: {0}")]
    InvalidPanel(String),

    #[error("invalid threshold list: {0}")]
    InvalidThresholds(String),

    #[error("value {value} at index {index} outside [{lo}, {hi}]")]
    OutOfRange {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("misaligned sync series: {0}")]
    Misaligned(String),

    #[error("calendar does not overlap the result range {first}..{last}")]
    DisjointCalendar { first: YearMonth, last: YearMonth },

    #[error("invalid recession calendar: {0}")]
    InvalidCalendar(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("series '{id}': {source}")]
    Series {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("pair ({left}, {right}): {source}")]
    Pair {
        left: String,
        right: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn in_series(self, id: &str) -> Self {
        Error::Series {
            id: id.to_string(),
            source: Box::new(self),
        }
    }

    pub(crate) fn in_pair(self, left: &str, right: &str) -> Self {
        Error::Pair {
            left: left.to_string(),
            right: right.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
