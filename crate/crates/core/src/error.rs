use thiserror::Error;

/// Errors raised while loading configuration or evaluating the model.
#[derive(Debug, Error)]
pub enum Error {
    /// The document does not match the expected schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// The document parsed but some values are physically implausible.
    #[error("validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The model configuration is internally inconsistent.
    #[error("misconfiguration: {0}")]
    Misconfiguration(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema { .. } | Error::Validation(_) | Error::Misconfiguration(_) => 2,
            Error::Io { .. } => 3,
            Error::Domain(_) => 4,
        }
    }

    /// Prefixes the message with the location it was raised from.
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
            Error::Misconfiguration(m) => Error::Misconfiguration(format!("{ctx}: {m}")),
            Error::Schema { path, message } => Error::Schema {
                path,
                message: format!("{ctx}: {message}"),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
