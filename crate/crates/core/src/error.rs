use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid model, missing structure, or bad option.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// A requested exhaustive scan is larger than the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("empty rough class: {0}")]
    EmptyClass(String),

    #[error("unknown property {0:?}")]
    UnknownProperty(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
