//! `q`-energy on Laakso graphs: per-cube minimisers, the harmonic cascade
//! with its telescoping bound, gate collapse sums and capacitary ratios.

pub mod capacity;
pub mod cascade;
pub mod collapse;
pub mod config;
pub mod energy;
pub mod error;
pub mod random;
pub mod solve;

pub use capacity::{capacity_ratio, CapacityReport, DEFAULT_LAMBDA};
pub use cascade::{cascade, CascadeRow, EnergyCascade};
pub use collapse::{collapse_sum, CollapseReport};
pub use config::EnergyConfig;
pub use energy::{convexity_slack, cube_edges, edge_energies, energy, total_energy, variational_slack};
pub use error::{EnergyError, Result};
pub use random::mcshane_map;
pub use solve::{minimize_piece, PieceSolution};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
