//! Single-jump chains `x -> p_- ~> p_+ -> y` with one contracted hop.

use laakso_core::VertexId;

use crate::eta::{EtaGraph, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Jump {
    pub set: usize,
    /// Member index of `p_-` inside the set.
    pub from_index: usize,
    /// Member index of `p_+` inside the set.
    pub to_index: usize,
    pub from: VertexId,
    pub to: VertexId,
    /// `d(x, p_-) + eta_i delta_i + d(p_+, y)` in units of `1/(D L)`.
    pub cost: u64,
}

/// All ordered distinct member pairs, visited in (level, height, prefix, member) order.
fn for_each_jump(eg: &EtaGraph, dx: &[u64], dy: &[u64], mut f: impl FnMut(Jump)) {
    for (id, s) in eg.sets().iter().enumerate() {
        let c = eg.chord_units(id);
        for (i, &p) in s.members.iter().enumerate() {
            for (j, &q) in s.members.iter().enumerate() {
                if i != j {
                    let cost = dx[p as usize] + c + dy[q as usize];
                    f(Jump { set: id, from_index: i, to_index: j, from: p, to: q, cost });
                }
            }
        }
    }
}

/// Cheapest single-jump chain from `x` to `y`, or `None` when no jump beats `d(x, y)`.
pub fn best_single_jump(eg: &EtaGraph, x: VertexId, y: VertexId) -> Option<Jump> {
    let dx = eg.distances(Metric::Base, &[x], None);
    let dy = eg.distances(Metric::Base, &[y], None);
    let direct = dx[y as usize];
    let mut best: Option<Jump> = None;
    for_each_jump(eg, &dx, &dy, |j| {
        if j.cost < direct && best.map_or(true, |b| j.cost < b.cost) {
            best = Some(j);
        }
    });
    best
}

/// Every single-jump chain from `x` to `y` whose cost is at most `bound` units.
pub fn jumps_within(eg: &EtaGraph, x: VertexId, y: VertexId, bound: u64) -> Vec<Jump> {
    let dx = eg.distances(Metric::Base, &[x], None);
    let dy = eg.distances(Metric::Base, &[y], None);
    let mut out = Vec::new();
    for_each_jump(eg, &dx, &dy, |j| {
        if j.cost <= bound {
            out.push(j);
        }
    });
    out
}
