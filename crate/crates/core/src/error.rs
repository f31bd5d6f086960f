use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested operation needs a capability the instance lacks,
    /// e.g. exhaustive search over an infinite carrier.
    #[error("capability error: {0}")]
    Capability(String),

    #[error("element {element} does not belong to the {carrier} carrier of instance {instance}")]
    ForeignElement {
        element: String,
        carrier: &'static str,
        instance: String,
    },

    #[error("element {0} has infinite value")]
    InfiniteElement(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
