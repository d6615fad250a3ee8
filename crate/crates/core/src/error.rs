use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cyclotomic order {order} exceeds the configured cap {cap}")]
    OrderTooLarge { order: u64, cap: u32 },

    #[error("root of unity with zero denominator")]
    ZeroRootDenominator,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix with {entries} entries exceeds the cap of {cap} entries")]
    SizeCap { entries: u128, cap: usize },

    #[error("singular matrix: no nonzero pivot at elimination stage {stage}")]
    Singular { stage: usize },

    #[error("{0} is not invertible")]
    NotInvertible(&'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Data(Box<DataError>),

    #[error("missing symbol {0}")]
    MissingSymbol(String),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("unknown built-in category '{0}' (expected one of: ising, jk6)")]
    UnknownBuiltin(String),

    #[error("{labels} labels with max_summands {max_summands} is too large for an exhaustive scan; call is_gybe_object on explicit candidates instead")]
    SearchTooLarge { labels: usize, max_summands: usize },

    #[error("Frobenius-Perron iteration did not converge after {steps} steps")]
    NoConvergence { steps: usize },

    #[error("generator {index} is not invertible")]
    NonInvertibleGenerator { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<DataError> for Error {
    fn from(e: DataError) -> Self {
        Error::Data(Box::new(e))
    }
}

/// Problems found while loading or validating fusion/category data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DataError {
    #[error("malformed data at {location}: {reason}")]
    Malformed { location: String, reason: String },

    #[error("unknown label '{label}' at {location}")]
    UnknownLabel { label: String, location: String },

    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),

    #[error("incomplete fusion table: no entry for {a} x {b}")]
    IncompleteFusion { a: String, b: String },

    #[error("fusion multiplicity: {c} appears more than once in {a} x {b} (only multiplicity-free rings are supported)")]
    FusionMultiplicity { a: String, b: String, c: String },

    #[error("fusion is not commutative: {a} x {b} differs from {b} x {a}")]
    NonCommutative { a: String, b: String },

    #[error("unit law violated: {unit} x {a} is not {a}")]
    UnitLaw { unit: String, a: String },

    #[error("non-associative fusion: ({a} x {b}) x {c} differs from {a} x ({b} x {c})")]
    NonAssociative { a: String, b: String, c: String },

    #[error("bad dual for '{label}': {reason}")]
    BadDual { label: String, reason: String },

    #[error("R-symbol R^{{{a}{b}}}_{{{c}}} is invalid: {reason}")]
    InvalidR {
        a: String,
        b: String,
        c: String,
        reason: String,
    },

    #[error("singular F-matrix F^{{{a}{b}{c}}}_{{{d}}}")]
    SingularF {
        a: String,
        b: String,
        c: String,
        d: String,
    },

    #[error("F-matrix F^{{{a}{b}{c}}}_{{{d}}}: {reason}")]
    InvalidF {
        a: String,
        b: String,
        c: String,
        d: String,
        reason: String,
    },
}
