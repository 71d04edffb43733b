//! Lipschitz maps on Laakso graphs that separate shortcut sets.
//!
//! A [`PAMap`] stores one vector per vertex and is affine along edges, so its
//! Lipschitz constant is the largest edge slope.

pub mod blocks;
pub mod error;
pub mod oscillation;
pub mod pamap;

pub use blocks::{
    bad_map_blocked_lq, bad_map_r2, block_lips, check_affine, orthogonal_direction, orthogonal_step, tent_block, tent_units,
};
pub use error::{MapError, Result};
pub use oscillation::{bad_density, contracted_diameter, oscillation_report, BadDensity, OscEntry, OscillationReport};
pub use pamap::{Norm, PAMap};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
