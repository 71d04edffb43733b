use laakso_core::LaaksoError;
use lipschitz_maps::MapError;
use shortcut_metric::ShortcutError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error(transparent)]
    Core(#[from] LaaksoError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
    #[error("invalid energy configuration: {0}")]
    Config(String),
    #[error("solver stopped after {iterations} iterations with relative decrease {residual:e}")]
    Convergence { iterations: usize, residual: f64 },
    #[error("linear solve failed: {0}")]
    Linear(String),
    #[error("cube and map do not belong to the same graph: {0}")]
    Mismatch(String),
    #[error("unsupported target: {0}")]
    Unsupported(String),
    #[error("ratio undefined: {0}")]
    UndefinedRatio(String),
}

pub type Result<T> = std::result::Result<T, EnergyError>;
