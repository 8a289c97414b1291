use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate episode id {0:?}")]
    DuplicateId(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dictionary is empty after pruning")]
    EmptyDictionary,
    #[error("no documents supplied")]
    NoDocuments,
    #[error("all training documents are empty")]
    EmptyCorpus,
    #[error("term id {id} out of range for vocabulary of size {vocab_size}")]
    TermOutOfRange { id: usize, vocab_size: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("corrupt model file: {0}")]
    CorruptModel(String),
    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),
    #[error("corrupt confusion model: {0}")]
    CorruptConfusion(String),
    #[error("corrupt dictionary: {0}")]
    CorruptDictionary(String),
    #[error("word {0:?} is not in the confusion model")]
    UnknownWord(String),
    #[error("word {0:?} never occurs in the coherence corpus")]
    ZeroDocumentFrequency(String),
    #[error("reference transcript is empty")]
    EmptyReference,
    #[error("document sets differ in size: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("{strategy} strategy needs {what}")]
    MissingResource {
        strategy: &'static str,
        what: &'static str,
    },
    #[error("decile analysis needs at least 10 episodes, got {0}")]
    TooFewEpisodes(usize),
    #[error("grid point {point}: {source}")]
    GridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
