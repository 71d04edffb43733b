use std::io;
use std::path::PathBuf;

use diamond_graphs::DiamondError;
use harmonic_energy::EnergyError;
use laakso_core::LaaksoError;
use lipschitz_light::LightError;
use lipschitz_maps::MapError;
use shortcut_metric::ShortcutError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] LaaksoError),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Diamond(#[from] DiamondError),
    #[error(transparent)]
    Light(#[from] LightError),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

fn core_code(e: &LaaksoError) -> i32 {
    match e {
        LaaksoError::Param(_) | LaaksoError::TooLarge { .. } | LaaksoError::Level { .. } => EXIT_SCHEMA,
        LaaksoError::Lookup(_) => EXIT_INVARIANT,
    }
}

fn shortcut_code(e: &ShortcutError) -> i32 {
    match e {
        ShortcutError::Core(c) => core_code(c),
        ShortcutError::Eta(_) | ShortcutError::Param(_) => EXIT_SCHEMA,
        ShortcutError::Schedule(_) => EXIT_INVARIANT,
    }
}

fn map_code(e: &MapError) -> i32 {
    match e {
        MapError::Core(c) => core_code(c),
        MapError::Shortcut(s) => shortcut_code(s),
        MapError::Level { .. } => EXIT_SCHEMA,
        MapError::NotAffine { .. } | MapError::Invalid(_) => EXIT_INVARIANT,
    }
}

impl LabError {
    /// Process exit status: 2 for schema errors, 3 for solver failures, 4 for invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Schema(_) => EXIT_SCHEMA,
            LabError::Solver(_) => EXIT_SOLVER,
            LabError::Invariant(_) => EXIT_INVARIANT,
            LabError::Io { .. } => EXIT_IO,
            LabError::Core(e) => core_code(e),
            LabError::Shortcut(e) => shortcut_code(e),
            LabError::Map(e) => map_code(e),
            LabError::Energy(e) => match e {
                EnergyError::Core(c) => core_code(c),
                EnergyError::Map(m) => map_code(m),
                EnergyError::Shortcut(s) => shortcut_code(s),
                EnergyError::Config(_) | EnergyError::Unsupported(_) => EXIT_SCHEMA,
                EnergyError::Convergence { .. } | EnergyError::Linear(_) => EXIT_SOLVER,
                EnergyError::Mismatch(_) | EnergyError::UndefinedRatio(_) => EXIT_INVARIANT,
            },
            LabError::Diamond(e) => match e {
                DiamondError::Core(c) => core_code(c),
                DiamondError::Param(_) | DiamondError::LevelSet(_) => EXIT_SCHEMA,
                DiamondError::OffGrid(_) | DiamondError::Mismatch(_) => EXIT_INVARIANT,
            },
            LabError::Light(e) => match e {
                LightError::Core(c) => core_code(c),
                LightError::Shortcut(s) => shortcut_code(s),
                LightError::Interval(_) | LightError::Radius(_) => EXIT_SCHEMA,
                LightError::Invariant(_) => EXIT_INVARIANT,
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}
