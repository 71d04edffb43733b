use laakso_core::LaaksoError;
use shortcut_metric::ShortcutError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapError {
    #[error(transparent)]
    Core(#[from] LaaksoError),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
    #[error("level {level} outside 1..={depth}")]
    Level { level: usize, depth: usize },
    #[error("map is not affine on the level-{level} piece at interval {interval}: deviation {deviation:e}")]
    NotAffine { level: usize, interval: u64, deviation: f64 },
    #[error("invalid map: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, MapError>;
