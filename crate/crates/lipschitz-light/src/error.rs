use laakso_core::LaaksoError;
use shortcut_metric::ShortcutError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LightError {
    #[error(transparent)]
    Core(#[from] LaaksoError),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
    #[error("invalid interval: {0}")]
    Interval(String),
    #[error("invalid radius: {0}")]
    Radius(String),
    #[error("class structure broken: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, LightError>;
