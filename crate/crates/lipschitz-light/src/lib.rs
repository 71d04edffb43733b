//! Lipschitz lightness of the height map on shortcut Laakso graphs.
//!
//! [`r_components`] groups a vertex set into `r`-components, [`class_partition`]
//! builds the prefix classes `E_A` of a canonical interval together with their
//! separation and diameters, and [`light_constant`] sweeps intervals and radii
//! for the empirical lightness constant.

pub mod classes;
pub mod components;
pub mod error;
pub mod light;
pub mod separation;

pub use classes::{class_partition, intervals, level_sets, sample_intervals, ClassPartition, CubeInterval};
pub use components::{r_components, Components, DistanceTable};
pub use error::{LightError, Result};
pub use light::{light_constant, LightReport, LightRow, RGrid};
pub use separation::{basic_separation, basic_separation_pairs, member_pairs, BasicSeparationReport, SeparationSample};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
