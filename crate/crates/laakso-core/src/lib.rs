//! Finite Laakso graphs `G_n` with exact integer heights.
//!
//! Heights are stored as numerators over `D = N_1 * .. * N_{n+1}` so every edge
//! has length exactly one unit and every distance is an integer count of
//! units. Rationals are only formed at the public boundary.

pub mod cubes;
pub mod error;
pub mod formula;
pub mod graph;
pub mod heights;
pub mod params;

pub use cubes::Cube;
pub use error::{LaaksoError, Result};
pub use graph::{build_graph, LVertex, LaaksoGraph, VertexId, WILDCARD};
pub use params::{Dimension, LaaksoParams, DEFAULT_VERTEX_CAP};

/// Exact rational used across the workspace.
pub type Rational = num_rational::Ratio<i64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
