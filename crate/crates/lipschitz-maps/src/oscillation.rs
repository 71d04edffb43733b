//! Oscillation of a map across shortcut sets and the finite surrogate of `Bad_eps(f)`.

use std::ops::RangeInclusive;

use laakso_core::{Rational, VertexId};
use shortcut_metric::{EtaGraph, Metric};

use crate::error::{MapError, Result};
use crate::pamap::PAMap;

#[derive(Clone, Debug, PartialEq)]
pub struct OscEntry {
    pub level: usize,
    pub set: usize,
    pub diam_f: f64,
    /// Contracted diameter of the member set.
    pub diam_eta: Rational,
    /// `diam f(S) / diam_eta S`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillationReport {
    pub eps: f64,
    pub entries: Vec<OscEntry>,
    /// Set ids of `J_i^eps(f) = { S in J_i : diam f(S) >= eps eta_i delta_i }`, indexed by `i - 1`.
    pub bad_sets: Vec<Vec<usize>>,
}

impl OscillationReport {
    /// Range of `ratio` over the sets of the given levels.
    pub fn ratio_range(&self, levels: &[usize]) -> Option<(f64, f64)> {
        self.entries
            .iter()
            .filter(|e| levels.contains(&e.level))
            .map(|e| e.ratio)
            .fold(None, |acc, r| match acc {
                None => Some((r, r)),
                Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
            })
    }
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_graph(f: &PAMap, eg: &EtaGraph) -> Result<()> {
    if !std::sync::Arc::ptr_eq(f.graph(), eg.base_arc()) {
        return Err(MapError::Invalid("map and contracted graph use different base graphs".into()));
    }
    Ok(())
}

/// Contracted diameter of a set, searching only inside the ball of radius `eta_i delta_i`.
pub fn contracted_diameter(eg: &EtaGraph, set: usize) -> u64 {
    let s = &eg.sets()[set];
    let cutoff = eg.chord_units(set);
    let mut best = 0;
    for (k, &z) in s.members.iter().enumerate() {
        let local = eg.local_distances(Metric::Eta, &[z], cutoff);
        for w in &s.members[k + 1..] {
            best = best.max(local.get(w).copied().unwrap_or(cutoff));
        }
    }
    best
}

pub fn oscillation_report(f: &PAMap, eg: &EtaGraph, eps: f64) -> Result<OscillationReport> {
    check_graph(f, eg)?;
    if !(eps > 0.0) {
        return Err(MapError::Invalid(format!("eps = {eps} must be positive")));
    }
    let mut entries = Vec::with_capacity(eg.sets().len());
    let mut bad_sets = vec![Vec::new(); eg.depth()];
    for (id, s) in eg.sets().iter().enumerate() {
        let diam_f = f.diam_of(&s.members);
        let diam_eta = eg.units_to_rational(contracted_diameter(eg, id));
        let ratio = diam_f / to_f64(diam_eta);
        if diam_f >= eps * to_f64(eg.chord_weight(id)) {
            bad_sets[s.level - 1].push(id);
        }
        entries.push(OscEntry { level: s.level, set: id, diam_f, diam_eta, ratio });
    }
    Ok(OscillationReport { eps, entries, bad_sets })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BadDensity {
    pub covered_weight: u64,
    pub total_weight: u64,
}

impl BadDensity {
    pub fn fraction(&self) -> f64 {
        self.covered_weight as f64 / self.total_weight as f64
    }
}

/// Measure of vertices within `eta_i delta_i / eps` (in `d_eta`) of `U J_i^eps(f)` for some level `i` in `levels`.
pub fn bad_density(report: &OscillationReport, eg: &EtaGraph, levels: RangeInclusive<usize>) -> BadDensity {
    let g = eg.base();
    let mut covered = vec![false; g.vertex_count()];
    for i in levels {
        if i == 0 || i > eg.depth() || report.bad_sets[i - 1].is_empty() {
            continue;
        }
        let ids = &report.bad_sets[i - 1];
        let sources: Vec<VertexId> = ids.iter().flat_map(|&id| eg.sets()[id].members.iter().copied()).collect();
        let chord = ids.iter().map(|&id| eg.chord_units(id)).max().unwrap() as f64;
        let radius = (chord / report.eps).floor();
        let cutoff = if radius >= (u64::MAX / 4) as f64 { u64::MAX / 4 } else { radius as u64 };
        let dist = eg.distances(Metric::Eta, &sources, Some(cutoff));
        for (v, d) in dist.iter().enumerate() {
            if *d != u64::MAX {
                covered[v] = true;
            }
        }
    }
    let covered_weight = (0..g.vertex_count()).filter(|&v| covered[v]).map(|v| g.degree(v as VertexId) as u64).sum();
    BadDensity { covered_weight, total_weight: 2 * g.edge_count() as u64 }
}
