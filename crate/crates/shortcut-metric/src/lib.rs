//! Shortcut families `J_i` of Laakso graphs and the contracted metric `d_eta`.
//!
//! [`EtaGraph`] adds a chord of weight `eta_i delta_i` between every pair of
//! members of a level-`i` shortcut set; `d_eta` is its shortest-path metric.

pub mod checks;
pub mod constants;
pub mod density;
pub mod error;
pub mod eta;
pub mod jump;
pub mod schedule;
pub mod shortcuts;

pub use density::{density_profile, DensityProfile};
pub use error::{Result, ShortcutError};
pub use eta::{EtaGraph, EtaSchedule, Metric, DEFAULT_ETA_DENOMINATOR};
pub use jump::{best_single_jump, jumps_within, Jump};
pub use schedule::{schedule_blocks, ScheduleReport};
pub use shortcuts::{enumerate_shortcuts, shortcut_family, ShortcutFamily, ShortcutSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
