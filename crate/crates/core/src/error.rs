use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A generator or operation argument outside its domain.
    #[error("invalid parameter `{name}`: {message}")]
    Param { name: String, message: String },

    /// A model configuration that does not validate against the model metadata.
    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Param { name: name.into(), message: message.into() }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    /// True for errors caused by user-supplied input rather than by running a simulation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Param { .. } | Error::Config { .. } | Error::UnknownModel(_) | Error::Json(_)
        )
    }
}
