use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error at line {line} (key `{key}`): {message}")]
    Parse { line: usize, key: String, message: String },

    #[error("invalid config:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed result table: {0}")]
    Table(String),
}

impl CliError {
    /// 2 for config errors, 3 for numerical errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } | CliError::Table(_) => 1,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<ditsim_core::Error> for CliError {
    fn from(e: ditsim_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}
