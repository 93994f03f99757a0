use thiserror::Error;

/// Errors raised by the geometry, validation and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or label sets that do not fit together (wrong arity, bad label, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// The input does not span its ambient space.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A construction could not certify its general-position assumptions.
    #[error("genericity check failed: {0}")]
    Genericity(String),

    /// A constructed family did not validate with the expected status.
    #[error("validation failed: {0}")]
    Validation(String),

    /// An identity that must hold for any correct input was violated.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("infeasible model: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}
