use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Each variant maps to a stable machine-readable code (see [`Error::code`])
/// and to an error class used by the command-line front end to pick its exit
/// status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("reference is empty")]
    EmptyReference,
    #[error("no word tokens to score")]
    EmptyInput,
    #[error("phonetic encoding of an empty word")]
    EmptyWord,
    #[error("class {class} has a zero count")]
    ZeroCount { class: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("offset {offset} is smaller than required {required}")]
    OffsetTooSmall { offset: usize, required: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid counts: {accurate} accurate out of {total}")]
    InvalidCounts { accurate: u64, total: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed rating matrix: {0}")]
    MalformedMatrix(String),
    #[error("labels missing: {0}")]
    MissingLabels(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("missing resource: {0}")]
    MissingResource(String),
    #[error("model kind mismatch: expected {expected}, found {found}")]
    WrongModelKind { expected: String, found: String },
    #[error("{}:{line}:{column}: {reason}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("{}: invalid UTF-8 on line {line}", path.display())]
    BadEncoding { path: PathBuf, line: usize },
    #[error("translation client unavailable: {0}")]
    ClientUnavailable(String),
    #[error("no fixture entry for {task} {src}->{tgt}: {text:?}")]
    FixtureMiss {
        task: String,
        src: String,
        tgt: String,
        text: String,
    },
    #[error("mask predictor failed: {0}")]
    PredictorFailure(String),
    #[error("unsupported model version {0}")]
    UnsupportedVersion(u32),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Coarse grouping of errors, used for process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Data,
    Client,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyCorpus => "EMPTY_CORPUS",
            Error::EmptyTrainingSet => "EMPTY_TRAINING_SET",
            Error::EmptyReference => "EMPTY_REFERENCE",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::EmptyWord => "EMPTY_WORD",
            Error::ZeroCount { .. } => "ZERO_COUNT",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::OffsetTooSmall { .. } => "OFFSET_TOO_SMALL",
            Error::InvalidProbability(_) => "INVALID_PROBABILITY",
            Error::InvalidCounts { .. } => "INVALID_COUNTS",
            Error::InvalidConfig(_) => "INVALID_CONFIG",
            Error::MalformedMatrix(_) => "MALFORMED_MATRIX",
            Error::MissingLabels(_) => "MISSING_LABELS",
            Error::InsufficientData(_) => "INSUFFICIENT_DATA",
            Error::MissingResource(_) => "MISSING_RESOURCE",
            Error::WrongModelKind { .. } => "WRONG_MODEL_KIND",
            Error::Malformed { .. } => "MALFORMED",
            Error::BadEncoding { .. } => "BAD_ENCODING",
            Error::ClientUnavailable(_) => "CLIENT_UNAVAILABLE",
            Error::FixtureMiss { .. } => "FIXTURE_MISS",
            Error::PredictorFailure(_) => "PREDICTOR_FAILURE",
            Error::UnsupportedVersion(_) => "UNSUPPORTED_VERSION",
            Error::Json(_) => "JSON",
            Error::Io(_) => "IO_FAILURE",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::ClientUnavailable(_) | Error::FixtureMiss { .. } | Error::PredictorFailure(_) => {
                ErrorClass::Client
            }
            _ => ErrorClass::Data,
        }
    }

    pub(crate) fn malformed(
        path: impl Into<PathBuf>,
        line: usize,
        column: usize,
        reason: impl Into<String>,
    ) -> Self {
        Error::Malformed {
            path: path.into(),
            line,
            column,
            reason: reason.into(),
        }
    }
}
