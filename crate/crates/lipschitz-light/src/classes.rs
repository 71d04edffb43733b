//! Canonical height intervals and the class partition `A_eta(I)`.
//!
//! For `I` of level `n >= 2`, `L_W(I)` collects the levels `l < n` whose
//! wormhole heights meet `I` and `L_J(I, eta)` the levels `l < n` whose jump
//! heights meet `I` with `eta_l delta_l <= |I|`. Two prefixes `a, b` in
//! `[M]^{n-1}` share a class when they differ only at levels of `L_W u L_J`
//! and, if they differ at the jump level `l`, every digit after `l` outside
//! `L_W` equals 1. `E_A` is the part of `h^{-1}(I)` over the prefixes of `A`.

use laakso_core::{heights, LaaksoGraph, Rational, VertexId, WILDCARD};
use shortcut_metric::{EtaGraph, Metric};

use crate::components::DistanceTable;
use crate::error::{LightError, Result};

/// The interval `[k / P_level, (k + 1) / P_level]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeInterval {
    pub level: usize,
    pub index: u64,
}

impl CubeInterval {
    pub fn new(g: &LaaksoGraph, level: usize, index: u64) -> Result<Self> {
        if level == 0 || level > g.depth() + 1 {
            return Err(LightError::Interval(format!("level {level} outside 1..={}", g.depth() + 1)));
        }
        let count = g.params().prefix_product(level);
        if index >= count {
            return Err(LightError::Interval(format!("index {index} outside 0..{count} at level {level}")));
        }
        Ok(Self { level, index })
    }

    /// Endpoints in units of `1/D`.
    pub fn bounds(&self, g: &LaaksoGraph) -> (u64, u64) {
        let u = g.params().scale_units(self.level);
        (self.index * u, (self.index + 1) * u)
    }

    /// `|I|` in units of `1/D`.
    pub fn length_units(&self, g: &LaaksoGraph) -> u64 {
        g.params().scale_units(self.level)
    }

    /// Vertices with height in `I`, ordered by id.
    pub fn preimage(&self, g: &LaaksoGraph) -> Vec<VertexId> {
        let (lo, hi) = self.bounds(g);
        (g.vertices_at(lo).start..g.vertices_at(hi).end).collect()
    }
}

/// Every interval of one level.
pub fn intervals(g: &LaaksoGraph, level: usize) -> Result<Vec<CubeInterval>> {
    CubeInterval::new(g, level, 0)?;
    Ok((0..g.params().prefix_product(level)).map(|index| CubeInterval { level, index }).collect())
}

/// At most `per_level` evenly strided intervals of each level in `levels`, including the first and last.
pub fn sample_intervals(g: &LaaksoGraph, levels: std::ops::RangeInclusive<usize>, per_level: usize) -> Result<Vec<CubeInterval>> {
    let mut out = Vec::new();
    for level in levels {
        let all = intervals(g, level)?;
        let k = per_level.max(1).min(all.len());
        if k == 1 {
            out.push(all[0]);
            continue;
        }
        let mut picked: Vec<CubeInterval> = (0..k).map(|s| all[s * (all.len() - 1) / (k - 1)]).collect();
        picked.dedup();
        out.extend(picked);
    }
    Ok(out)
}

/// `eta_l delta_l <= |I|`, exactly.
fn chord_fits(eg: &EtaGraph, l: usize, interval_units: u64) -> bool {
    let eta = eg.schedule().eta(l);
    let delta = eg.base().params().scale_units(l) as i128;
    *eta.numer() as i128 * delta <= *eta.denom() as i128 * interval_units as i128
}

/// `(L_W(I), L_J(I, eta))`.
pub fn level_sets(eg: &EtaGraph, interval: &CubeInterval) -> (Vec<usize>, Vec<usize>) {
    let g = eg.base();
    let grid = g.params().grid();
    let (lo, hi) = interval.bounds(g);
    let len = interval.length_units(g);
    let mut l_w = Vec::new();
    let mut l_j = Vec::new();
    for l in 1..interval.level {
        if heights::wormhole_meets(grid, l, lo, hi) {
            l_w.push(l);
        }
        if heights::jump_units(grid, l).iter().any(|&t| lo <= t && t <= hi) && chord_fits(eg, l, len) {
            l_j.push(l);
        }
    }
    (l_w, l_j)
}

/// Whether `b` lies in `A(I, eta; a)`.
fn related(a: &[u8], b: &[u8], l_w: &[usize], l_j: &[usize]) -> bool {
    let delta: Vec<usize> = (1..=a.len()).filter(|&j| a[j - 1] != b[j - 1]).collect();
    if !delta.iter().all(|j| l_w.contains(j) || l_j.contains(j)) {
        return false;
    }
    match delta.iter().filter(|j| l_j.contains(j)).min() {
        None => true,
        Some(&l) => (l + 1..=a.len()).filter(|j| !l_w.contains(j)).all(|j| a[j - 1] == 1 && b[j - 1] == 1),
    }
}

fn words(m: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for w in &out {
            for c in 1..=m {
                let mut w2 = w.clone();
                w2.push(c);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

fn code(word: &[u8], m: u8) -> usize {
    word.iter().fold(0, |acc, &d| acc * m as usize + (d as usize - 1))
}

#[derive(Clone, Debug)]
pub struct ClassPartition {
    pub interval: CubeInterval,
    /// `|I|` in contracted units.
    pub interval_units: u64,
    pub l_w: Vec<usize>,
    pub l_j: Vec<usize>,
    /// Prefixes in `[M]^{n-1}` of each class.
    pub classes: Vec<Vec<Vec<u8>>>,
    /// `E_A` for each class, ordered by vertex id.
    pub members: Vec<Vec<VertexId>>,
    /// Least `d_eta` between distinct classes, `None` with a single class.
    pub separation: Option<u64>,
    pub max_diameter: u64,
}

impl ClassPartition {
    pub fn separation_ratio(&self) -> Option<Rational> {
        self.separation.map(|s| Rational::new(s as i64, self.interval_units as i64))
    }

    pub fn diameter_ratio(&self) -> Rational {
        Rational::new(self.max_diameter as i64, self.interval_units as i64)
    }

    /// Separation at least `|I|/3` and diameter at most `5|I|`.
    pub fn holds(&self) -> bool {
        self.separation.map_or(true, |s| 3 * s >= self.interval_units) && self.max_diameter <= 5 * self.interval_units
    }

    /// Index of the class whose `E_A` contains `v`.
    pub fn class_of(&self, v: VertexId) -> Option<usize> {
        self.members.iter().position(|m| m.binary_search(&v).is_ok())
    }
}

pub fn class_partition(eg: &EtaGraph, interval: &CubeInterval) -> Result<ClassPartition> {
    let g = eg.base();
    let n = interval.level;
    if n < 2 {
        return Err(LightError::Interval(format!("class partitions need level >= 2, got {n}")));
    }
    CubeInterval::new(g, n, interval.index)?;
    let (l_w, l_j) = level_sets(eg, interval);
    if l_w.len() > 1 || l_j.len() > 1 || l_w.iter().any(|l| l_j.contains(l)) {
        return Err(LightError::Invariant(format!("L_W = {l_w:?}, L_J = {l_j:?}")));
    }
    let m = g.m() as u8;
    let all = words(m, n - 1);
    let mut class_id = vec![usize::MAX; all.len()];
    let mut classes: Vec<Vec<Vec<u8>>> = Vec::new();
    for (k, a) in all.iter().enumerate() {
        let cls: Vec<usize> = (0..all.len()).filter(|&b| related(a, &all[b], &l_w, &l_j)).collect();
        if class_id[k] == usize::MAX {
            for &b in &cls {
                if class_id[b] != usize::MAX {
                    return Err(LightError::Invariant(format!("prefix {:?} lies in two classes", all[b])));
                }
                class_id[b] = classes.len();
            }
            classes.push(cls.iter().map(|&b| all[b].clone()).collect());
        } else if cls.iter().any(|&b| class_id[b] != class_id[k]) || classes[class_id[k]].len() != cls.len() {
            return Err(LightError::Invariant(format!("relation is not an equivalence at {a:?}")));
        }
    }
    let mut members = vec![Vec::new(); classes.len()];
    for v in interval.preimage(g) {
        let word = &g.digits_of(v)[..n - 1];
        let mut ids = Vec::new();
        match word.iter().position(|&d| d == WILDCARD) {
            None => ids.push(class_id[code(word, m)]),
            Some(pos) => {
                for c in 1..=m {
                    let mut w = word.to_vec();
                    w[pos] = c;
                    ids.push(class_id[code(&w, m)]);
                }
            }
        }
        if ids.iter().any(|&c| c != ids[0]) {
            return Err(LightError::Invariant(format!("merged vertex {v} meets several classes")));
        }
        members[ids[0]].push(v);
    }
    let mut separation: Option<u64> = None;
    if members.len() > 1 {
        for (k, src) in members.iter().enumerate() {
            let d = eg.distances(Metric::Eta, src, None);
            for (k2, other) in members.iter().enumerate() {
                if k2 != k {
                    let best = other.iter().map(|&v| d[v as usize]).min().unwrap_or(u64::MAX);
                    separation = Some(separation.map_or(best, |s| s.min(best)));
                }
            }
        }
    }
    let max_diameter = members.iter().map(|m| DistanceTable::new(eg, m, Metric::Eta).diameter()).max().unwrap_or(0);
    Ok(ClassPartition {
        interval: *interval,
        interval_units: interval.length_units(g) * eg.scale(),
        l_w,
        l_j,
        classes,
        members,
        separation,
        max_diameter,
    })
}
