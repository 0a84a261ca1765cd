use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite objective value for individual {index}")]
    NonFiniteObjective { index: usize },
    #[error("individual {index} has not been evaluated")]
    Unevaluated { index: usize },
    #[error("zero-norm vector at index {index}")]
    ZeroNorm { index: usize },
    #[error("penalty normaliser must be positive, got {0}")]
    InvalidGamma(f64),
    #[error("activation cache does not belong to the current parameters")]
    StaleCache,
    #[error("training diverged at epoch {epoch}: {what}")]
    Training { epoch: usize, what: String },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
