use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("{what} did not converge within {iterations} iterations")]
    Convergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
