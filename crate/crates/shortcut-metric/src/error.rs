use laakso_core::LaaksoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShortcutError {
    #[error(transparent)]
    Core(#[from] LaaksoError),
    #[error("invalid eta schedule: {0}")]
    Eta(String),
    #[error("schedule selection failed: {0}")]
    Schedule(String),
    #[error("invalid argument: {0}")]
    Param(String),
}

pub type Result<T> = std::result::Result<T, ShortcutError>;
