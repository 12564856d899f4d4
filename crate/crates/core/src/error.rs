use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad rational literal {0:?}")]
    BadRational(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("matrix model: {0}")]
    MatrixShape(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
