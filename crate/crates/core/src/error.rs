use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid basis type ({n_min}, {k_period}): both components must be positive")]
    InvalidBasisType { n_min: u64, k_period: u64 },

    #[error("invalid witness pair ({a}, {b}): ranks must be positive and distinct")]
    InvalidWitnessPair { a: u64, b: u64 },

    #[error("empty witness set: no evidence that the algebra lacks IBN")]
    EmptyWitnessSet,

    #[error("witness pair entry {entry} exceeds the closure bound {bound}")]
    WitnessOutOfBound { entry: u64, bound: u64 },

    #[error("arithmetic overflow while computing {what}")]
    ArithmeticOverflow { what: &'static str },

    #[error("inductive limit over an empty family")]
    EmptyLimit,

    #[error("unknown catalog id `{0}`")]
    NotFound(String),

    #[error("ranks {a} and {b} are not equivalent for basis type ({n_min}, {k_period})")]
    NotEquivalent {
        a: u64,
        b: u64,
        n_min: u64,
        k_period: u64,
    },

    #[error("column {index} out of range for a matrix with {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("unknown generator `{0}` for this presentation")]
    UnknownGenerator(String),

    #[error("malformed polynomial at byte {offset}: {message}")]
    PolySyntax { offset: usize, message: String },

    #[error("malformed presentation id `{0}`")]
    BadPresentation(String),

    #[error("no witness construction for `{0}`")]
    NoWitnessConstruction(String),

    #[error("catalog entry `{id}` rejected: {reason}")]
    InvalidEntry { id: String, reason: String },

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
