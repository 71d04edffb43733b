//! Diamond (bundle) graphs `G(M; N_1, .., N_n)`, their `x/y` profiles,
//! restrictions to digit subsets, and projections of Laakso graphs onto them.
//!
//! Heights are integer numerators over `P = N_1 * .. * N_n`, so every edge
//! has length one unit and distances are BFS hop counts.

pub mod error;
pub mod graph;
pub mod profile;
pub mod project;
pub mod restrict;

pub use error::{DiamondError, Result};
pub use graph::{build_diamond, height_levels, DVertex, DiamondGraph, Label, DIAMOND_VERTEX_CAP};
pub use profile::{compute_p_g, height_digits, heights_of_level, midpoint_step_holds, xy_profile, XYProfile};
pub use project::{project_laakso, LaaksoProjection, PairImage};
pub use restrict::{project_label, restrict, restricted_grid, Restriction};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
