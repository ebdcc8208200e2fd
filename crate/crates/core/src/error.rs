use gpm_exact::KernelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} requires exact rational coordinates")]
    NeedsExact(&'static str),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("order unit fails to dominate direction {direction:?}")]
    NotOrderUnit { direction: Vec<String> },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(CoreError::DimensionMismatch { expected, got })
    }
}
