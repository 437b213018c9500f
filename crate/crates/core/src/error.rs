//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or invalid invocation; callers map this to a
    /// distinct exit code.
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    ParseFile {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("document cleaned down to nothing")]
    EmptyDocument,

    #[error("seed article has no interlanguage link to the target language")]
    NoInterlanguageLink,

    #[error("fetch failed for {url}: {msg}")]
    Fetch { url: String, msg: String },

    #[error("translation engine {engine} failed at line {line}: {msg}")]
    Engine {
        engine: String,
        line: usize,
        msg: String,
    },

    #[error("source file has {src} lines but translation file has {trans}")]
    LineCountMismatch { src: usize, trans: usize },

    #[error("alignment sets disagree on sentence lengths: {0}")]
    AlignmentLengthMismatch(String),

    #[error("metric evaluated on an empty corpus")]
    EmptyCorpus,

    #[error("{0}")]
    InvalidInput(String),

    #[error("stage {stage} failed for document {doc_id}: {msg}")]
    Stage {
        stage: String,
        doc_id: String,
        msg: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors that signal a bad configuration rather than a failure
    /// while processing data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::NoInterlanguageLink)
    }
}
