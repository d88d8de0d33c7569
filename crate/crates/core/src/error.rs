use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {s} (direction-number table covers 1..={max})")]
    UnsupportedDimension { s: usize, max: usize },

    #[error("expected {expected} points, found {found}")]
    SizeMismatch { expected: String, found: usize },

    #[error("point {index} stores {have} digits in coordinate {coord}, need {need}")]
    InsufficientDigits {
        index: usize,
        coord: usize,
        have: usize,
        need: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "cannot make coordinate {coord} injective: {class_size} points share an {prefix_len}-bit prefix but only {slots} tails exist"
    )]
    TailOverflow {
        coord: usize,
        prefix_len: usize,
        class_size: usize,
        slots: usize,
    },

    #[error("witness descent failed: {0}")]
    Descent(String),

    #[error("no interior witness exists for the descent prefixes (set is not q-good)")]
    NoWitness,

    #[error("perturbation retry cap exhausted after {attempts} attempts (seeds {seeds:?})")]
    PerturbationExhausted { attempts: usize, seeds: Vec<u64> },

    #[error("malformed {what}: {msg}")]
    Parse { what: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(what: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            what: what.into(),
            msg: msg.into(),
        }
    }
}
