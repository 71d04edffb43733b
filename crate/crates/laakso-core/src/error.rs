use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaaksoError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("vertex lookup failed: {0}")]
    Lookup(String),
    #[error("level {level} out of range (allowed {min}..={max})")]
    Level { level: usize, min: usize, max: usize },
    #[error("graph would have {vertices} vertices, above the cap of {cap}")]
    TooLarge { vertices: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, LaaksoError>;
