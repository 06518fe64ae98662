use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("invalid fan: {0}")]
    FanInvalid(String),
    #[error("divisor is not ample: strict inequality of ray {ray} fails at cone {cone}")]
    NotAmple { cone: usize, ray: usize },
    #[error("only dimension 2 can be drawn, got dimension {0}")]
    DimensionUnsupported(usize),
    #[error(transparent)]
    Core(#[from] frobsesh_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn schema(field: &str, message: impl Into<String>) -> Self {
        CliError::Schema {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
