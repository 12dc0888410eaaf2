use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("document `{0}` contains no words")]
    EmptyDocument(String),

    #[error("invalid word token {0:?}: tokens must be non-empty and free of whitespace")]
    InvalidToken(String),

    #[error("{path}: not valid UTF-8 (byte offset {offset}); enable the Latin-1 fallback for legacy files")]
    InvalidEncoding { path: PathBuf, offset: usize },

    #[error("word index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("intermixing needs at least 2 words, document has {0}")]
    TooFewWords(usize),

    #[error("compressor input is empty")]
    EmptyInput,

    #[error("invalid compressor configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("compression backend `{0}` is not available in this build")]
    BackendUnavailable(&'static str),

    #[error("malformed token stream: {0}")]
    CorruptTokens(String),

    #[error("volume curve is degenerate: V(0) = 0")]
    DegenerateCurve,

    #[error("fragment length {length} exceeds document length {symbols}")]
    FragmentTooLong { length: usize, symbols: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
