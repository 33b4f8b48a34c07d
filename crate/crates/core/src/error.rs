use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("malformed image file: {0}")]
    Parse(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("MSB overflow: value {value} exceeds maximum {max}")]
    Overflow { value: i32, max: i32 },

    #[error("MSB underflow: value {value} is below zero")]
    Underflow { value: i32 },

    #[error("capacity exceeded: secret needs {required} bits, at most {available} bits fit")]
    Capacity { required: usize, available: usize },

    #[error("corrupt auxiliary information: {0}")]
    CorruptAux(String),

    #[error("location map decode failed: {0}")]
    MapDecode(String),

    #[error("payload decode failed: {0}")]
    Payload(String),

    #[error("bit error rate is undefined for an empty reference stream")]
    UndefinedRate,

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
