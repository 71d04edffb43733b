use laakso_core::LaaksoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiamondError {
    #[error(transparent)]
    Core(#[from] LaaksoError),
    #[error("invalid diamond parameters: {0}")]
    Param(String),
    #[error("height {0} is not a grid point")]
    OffGrid(String),
    #[error("invalid level set: {0}")]
    LevelSet(String),
    #[error("constructions disagree: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, DiamondError>;
