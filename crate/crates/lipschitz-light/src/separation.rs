//! Sampled check of the basic separation bound for digit-differing pairs:
//! `3 d_eta(x, y) >= min(2 d(h{x, y}, W_j), 2 d({x, y}, uJ_j) + eta_j delta_j)`.
//!
//! Every quantity is an integer in contracted units, so the comparison is exact.

use laakso_core::{heights, VertexId, WILDCARD};
use rand::Rng;
use rayon::prelude::*;
use shortcut_metric::{EtaGraph, Metric};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationSample {
    pub x: VertexId,
    pub y: VertexId,
    pub level: usize,
    /// `3 d_eta(x, y)`.
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug, Default)]
pub struct BasicSeparationReport {
    pub samples: Vec<SeparationSample>,
}

impl BasicSeparationReport {
    pub fn violations(&self) -> usize {
        self.samples.iter().filter(|s| s.lhs < s.rhs).count()
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }
}

fn chord_units(eg: &EtaGraph, j: usize) -> u64 {
    let eta = eg.schedule().eta(j);
    *eta.numer() as u64 * (eg.scale() / *eta.denom() as u64) * eg.base().params().scale_units(j)
}

/// Checks `pairs` random vertex pairs at every level where their digits differ.
pub fn basic_separation<R: Rng>(eg: &EtaGraph, pairs: usize, rng: &mut R) -> BasicSeparationReport {
    let nv = eg.base().vertex_count();
    let chosen: Vec<(VertexId, VertexId)> =
        (0..pairs).map(|_| (rng.gen_range(0..nv) as VertexId, rng.gen_range(0..nv) as VertexId)).collect();
    basic_separation_pairs(eg, &chosen)
}

/// Unordered member pairs of every shortcut set.
pub fn member_pairs(eg: &EtaGraph) -> Vec<(VertexId, VertexId)> {
    eg.sets()
        .iter()
        .flat_map(|s| s.members.iter().enumerate().flat_map(move |(k, &a)| s.members[k + 1..].iter().map(move |&b| (a, b))))
        .collect()
}

/// Checks the given pairs at every level where their digits differ.
pub fn basic_separation_pairs(eg: &EtaGraph, chosen: &[(VertexId, VertexId)]) -> BasicSeparationReport {
    let g = eg.base();
    let n = g.depth();
    let grid = g.params().grid();
    let to_jumps: Vec<Vec<u64>> = (1..=n)
        .map(|j| {
            let members: Vec<VertexId> = eg.sets_of_level(j).iter().flat_map(|s| s.members.iter().copied()).collect();
            eg.distances(Metric::Base, &members, None)
        })
        .collect();
    let samples = chosen
        .par_iter()
        .flat_map_iter(|&(x, y)| {
            let d = eg.distances(Metric::Eta, &[x], None)[y as usize];
            let (dx, dy) = (g.digits_of(x), g.digits_of(y));
            let (hx, hy) = (g.height(x), g.height(y));
            let mut out = Vec::new();
            for j in 1..=n {
                let (a, b) = (dx[j - 1], dy[j - 1]);
                if a == WILDCARD || b == WILDCARD || a == b {
                    continue;
                }
                let to_w = heights::distance_to_wormholes(grid, j, hx, hy) * eg.scale();
                let to_j = to_jumps[j - 1][x as usize].min(to_jumps[j - 1][y as usize]);
                let rhs = (2 * to_w).min(2 * to_j + chord_units(eg, j));
                out.push(SeparationSample { x, y, level: j, lhs: 3 * d, rhs });
            }
            out
        })
        .collect();
    BasicSeparationReport { samples }
}
