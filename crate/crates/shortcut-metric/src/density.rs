//! Measure of shortcut neighbourhoods `B(U J_i, alpha_i delta_i)`.
//!
//! Each vertex carries half the weight of its incident edges, so measure
//! fractions are degree sums over `2 |E|` and are computed exactly.

use laakso_core::VertexId;

use crate::error::{Result, ShortcutError};
use crate::eta::{EtaGraph, Metric};

#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub metric: Metric,
    /// Degree sum of vertices within `alpha_i delta_i` of `U J_i`, per level.
    pub level_weight: Vec<u64>,
    /// Degree sum of vertices covered by some level in `i_0..=n`, indexed by `i_0 - 1`.
    pub cumulative_weight: Vec<u64>,
    /// `2 |E|`.
    pub total_weight: u64,
}

impl DensityProfile {
    pub fn level_fraction(&self, i: usize) -> f64 {
        self.level_weight[i - 1] as f64 / self.total_weight as f64
    }

    pub fn cumulative_fraction(&self, i0: usize) -> f64 {
        self.cumulative_weight[i0 - 1] as f64 / self.total_weight as f64
    }
}

/// `alpha` needs one entry per level `1..=n`.
pub fn density_profile(eg: &EtaGraph, alpha: &[f64], metric: Metric) -> Result<DensityProfile> {
    let n = eg.depth();
    if alpha.len() < n {
        return Err(ShortcutError::Param(format!("alpha has {} entries, depth is {n}", alpha.len())));
    }
    if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(ShortcutError::Param(format!("alpha value {a} is negative")));
    }
    let g = eg.base();
    let nv = g.vertex_count();
    let mut covered_any = vec![false; nv];
    let mut level_weight = vec![0u64; n];
    let mut cumulative_weight = vec![0u64; n];
    let mut running = 0u64;
    let weight = |v: usize| g.degree(v as VertexId) as u64;
    for i in (1..=n).rev() {
        let sources: Vec<VertexId> = eg.sets_of_level(i).iter().flat_map(|s| s.members.iter().copied()).collect();
        let radius = alpha[i - 1] * eg.scale_units(i) as f64;
        let cutoff = if radius >= (u64::MAX / 4) as f64 { u64::MAX / 4 } else { radius.floor() as u64 };
        let dist = eg.distances(metric, &sources, Some(cutoff));
        for v in 0..nv {
            if dist[v] != u64::MAX {
                level_weight[i - 1] += weight(v);
                if !covered_any[v] {
                    covered_any[v] = true;
                    running += weight(v);
                }
            }
        }
        cumulative_weight[i - 1] = running;
    }
    Ok(DensityProfile { metric, level_weight, cumulative_weight, total_weight: 2 * g.edge_count() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::EtaSchedule;
    use laakso_core::{build_graph, LaaksoParams};
    use std::sync::Arc;

    #[test]
    fn extreme_radii() {
        let g = Arc::new(build_graph(&LaaksoParams::constant(2, 4, 2).unwrap()).unwrap());
        let eg = EtaGraph::new(g.clone(), EtaSchedule::ones(2)).unwrap();
        let full = density_profile(&eg, &[100.0, 100.0], Metric::Base).unwrap();
        assert_eq!(full.level_fraction(1), 1.0);
        assert_eq!(full.cumulative_fraction(1), 1.0);
        let none = density_profile(&eg, &[0.0, 0.0], Metric::Eta).unwrap();
        let members: u64 = eg.sets().iter().flat_map(|s| &s.members).map(|&v| g.degree(v) as u64).sum();
        assert_eq!(none.cumulative_weight[0], members);
    }
}
