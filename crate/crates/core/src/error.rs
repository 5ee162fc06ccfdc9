use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("operator needs {expected} resources, model has {actual}")]
    WrongArity { expected: &'static str, actual: usize },

    #[error("violation vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("enumeration of {count} structures exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
