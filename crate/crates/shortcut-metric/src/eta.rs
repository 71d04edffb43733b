//! Contraction schedules and the augmented graph realizing `d_eta`.
//!
//! Distances are integers in units of `1/(D L)`, where `L` is the least common
//! denominator of the schedule. A base edge costs `L` units and a level-`i`
//! chord costs `eta_i * L * (D delta_i)` units.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use laakso_core::{LVertex, LaaksoGraph, Rational, VertexId};
use num_integer::Integer;

use crate::error::{Result, ShortcutError};
use crate::shortcuts::{enumerate_shortcuts, ShortcutSet};

/// Denominator used when a real-valued schedule is rounded to rationals.
pub const DEFAULT_ETA_DENOMINATOR: i64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Base,
    Eta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaSchedule {
    values: Vec<Rational>,
}

impl EtaSchedule {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        let one = Rational::from_integer(1);
        for (i, v) in values.iter().enumerate() {
            if *v <= Rational::from_integer(0) || *v > one {
                return Err(ShortcutError::Eta(format!("eta_{} = {v} is not in (0, 1]", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn constant(value: Rational, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn ones(len: usize) -> Self {
        Self { values: vec![Rational::from_integer(1); len] }
    }

    /// `eta_i = ratio^i`.
    pub fn geometric(ratio: Rational, len: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(len);
        let mut v = Rational::from_integer(1);
        for _ in 0..len {
            v *= ratio;
            values.push(v);
        }
        Self::new(values)
    }

    /// Rounds reals to multiples of `1/denominator`, clamped into `[1/denominator, 1]`.
    pub fn from_f64(values: &[f64], denominator: i64) -> Result<Self> {
        if denominator < 1 {
            return Err(ShortcutError::Eta("denominator must be positive".into()));
        }
        let mut out = Vec::with_capacity(values.len());
        for &x in values {
            if !(x.is_finite() && x > 0.0) {
                return Err(ShortcutError::Eta(format!("eta value {x} is not positive")));
            }
            let k = ((x * denominator as f64).round() as i64).clamp(1, denominator);
            out.push(Rational::new(k, denominator));
        }
        Self::new(out)
    }

    /// `eta_i = scale * i^-exponent`, rounded by [`EtaSchedule::from_f64`].
    pub fn power(exponent: f64, scale: f64, len: usize, denominator: i64) -> Result<Self> {
        let vals: Vec<f64> = (1..=len).map(|i| scale * (i as f64).powf(-exponent)).collect();
        Self::from_f64(&vals, denominator)
    }

    /// `eta_i`, one-based.
    pub fn eta(&self, i: usize) -> Rational {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Least common denominator of the first `levels` entries.
    pub fn common_denominator(&self, levels: usize) -> u64 {
        self.values[..levels].iter().fold(1i64, |l, v| l.lcm(v.denom())) as u64
    }

    /// `sum_i eta_i^s` over the stored prefix.
    pub fn power_sum(&self, s: f64) -> f64 {
        self.values.iter().map(|v| (*v.numer() as f64 / *v.denom() as f64).powf(s)).sum()
    }
}

/// Base graph plus one chord per unordered member pair of every shortcut set.
#[derive(Clone, Debug)]
pub struct EtaGraph {
    base: Arc<LaaksoGraph>,
    schedule: EtaSchedule,
    sets: Vec<ShortcutSet>,
    level_start: Vec<usize>,
    scale: u64,
    chord_units: Vec<u64>,
    member_set: Vec<u32>,
}

const NO_SET: u32 = u32::MAX;

impl EtaGraph {
    /// Needs one schedule entry per level `1..=n`; extra entries are ignored.
    pub fn new(base: Arc<LaaksoGraph>, schedule: EtaSchedule) -> Result<Self> {
        let n = base.depth();
        if schedule.len() < n {
            return Err(ShortcutError::Eta(format!("schedule has {} entries, depth is {n}", schedule.len())));
        }
        let scale = schedule.common_denominator(n);
        let mut sets = Vec::new();
        let mut level_start = vec![0];
        for fam in enumerate_shortcuts(&base)? {
            sets.extend(fam.sets);
            level_start.push(sets.len());
        }
        let mut member_set = vec![NO_SET; base.vertex_count()];
        let mut chord_units = Vec::with_capacity(sets.len());
        for (id, s) in sets.iter().enumerate() {
            let eta = schedule.eta(s.level);
            let u = base.params().scale_units(s.level);
            chord_units.push(*eta.numer() as u64 * (scale / *eta.denom() as u64) * u);
            for &v in &s.members {
                member_set[v as usize] = id as u32;
            }
        }
        Ok(Self { base, schedule, sets, level_start, scale, chord_units, member_set })
    }

    pub fn base(&self) -> &LaaksoGraph {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<LaaksoGraph> {
        &self.base
    }

    pub fn schedule(&self) -> &EtaSchedule {
        &self.schedule
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }

    /// All shortcut sets ordered by level, height and prefix.
    pub fn sets(&self) -> &[ShortcutSet] {
        &self.sets
    }

    /// Index range of the level-`i` sets inside [`EtaGraph::sets`].
    pub fn level_range(&self, i: usize) -> std::ops::Range<usize> {
        self.level_start[i - 1]..self.level_start[i]
    }

    pub fn sets_of_level(&self, i: usize) -> &[ShortcutSet] {
        &self.sets[self.level_range(i)]
    }

    /// Shortcut set containing `v`, if any.
    pub fn set_of(&self, v: VertexId) -> Option<usize> {
        let s = self.member_set[v as usize];
        (s != NO_SET).then_some(s as usize)
    }

    /// Units per base edge, `L`.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn chord_units(&self, set: usize) -> u64 {
        self.chord_units[set]
    }

    /// Chord weight `eta_i delta_i` as a rational.
    pub fn chord_weight(&self, set: usize) -> Rational {
        self.units_to_rational(self.chord_units[set])
    }

    /// Overrides the chord weight of one set. Used for fault injection.
    pub fn set_chord_units(&mut self, set: usize, units: u64) {
        self.chord_units[set] = units;
    }

    /// Converts contracted units `1/(D L)` to a rational.
    pub fn units_to_rational(&self, units: u64) -> Rational {
        Rational::new(units as i64, (self.base.denom() * self.scale) as i64)
    }

    /// `delta_i` in contracted units.
    pub fn scale_units(&self, i: usize) -> u64 {
        self.base.params().scale_units(i) * self.scale
    }

    /// Multi-source shortest paths in units of `1/(D L)`; entries beyond `cutoff` stay `u64::MAX`.
    pub fn distances(&self, metric: Metric, sources: &[VertexId], cutoff: Option<u64>) -> Vec<u64> {
        match metric {
            Metric::Base => {
                let limit = cutoff.unwrap_or(u64::MAX);
                self.base
                    .bfs_multi(sources)
                    .into_iter()
                    .map(|d| {
                        let u = if d == u32::MAX { u64::MAX } else { d as u64 * self.scale };
                        if u > limit {
                            u64::MAX
                        } else {
                            u
                        }
                    })
                    .collect()
            }
            Metric::Eta => self.dijkstra(sources, cutoff, None),
        }
    }

    fn dijkstra(&self, sources: &[VertexId], cutoff: Option<u64>, target: Option<VertexId>) -> Vec<u64> {
        let limit = cutoff.unwrap_or(u64::MAX);
        let mut dist = vec![u64::MAX; self.base.vertex_count()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s as usize] = 0;
            heap.push(Reverse((0u64, s)));
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v as usize] {
                continue;
            }
            if Some(v) == target {
                break;
            }
            let mut relax = |w: VertexId, nd: u64| {
                if nd <= limit && nd < dist[w as usize] {
                    dist[w as usize] = nd;
                    heap.push(Reverse((nd, w)));
                }
            };
            for &w in self.base.neighbors(v) {
                relax(w, d + self.scale);
            }
            if let Some(s) = self.set_of(v) {
                let c = self.chord_units[s];
                for &w in &self.sets[s].members {
                    if w != v {
                        relax(w, d + c);
                    }
                }
            }
        }
        dist
    }

    /// Shortest paths from `sources` restricted to the ball of radius `cutoff`, as a sparse map.
    pub fn local_distances(&self, metric: Metric, sources: &[VertexId], cutoff: u64) -> HashMap<VertexId, u64> {
        let mut dist: HashMap<VertexId, u64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist.insert(s, 0);
            heap.push(Reverse((0u64, s)));
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist.get(&v).is_some_and(|&best| d > best) {
                continue;
            }
            let mut relax = |w: VertexId, nd: u64| {
                if nd <= cutoff && dist.get(&w).map_or(true, |&old| nd < old) {
                    dist.insert(w, nd);
                    heap.push(Reverse((nd, w)));
                }
            };
            for &w in self.base.neighbors(v) {
                relax(w, d + self.scale);
            }
            if metric == Metric::Eta {
                if let Some(s) = self.set_of(v) {
                    let c = self.chord_units[s];
                    for &w in &self.sets[s].members {
                        if w != v {
                            relax(w, d + c);
                        }
                    }
                }
            }
        }
        dist
    }

    /// `d_eta(a, b)` in units of `1/(D L)`.
    pub fn dist_eta_units(&self, a: VertexId, b: VertexId) -> u64 {
        self.dijkstra(&[a], None, Some(b))[b as usize]
    }

    /// `d(a, b)` in units of `1/(D L)`.
    pub fn dist_base_units(&self, a: VertexId, b: VertexId) -> u64 {
        self.base.dist_units(a, b) * self.scale
    }

    pub fn dist_eta(&self, x: &LVertex, y: &LVertex) -> Result<Rational> {
        let a = self.base.lookup(x)?;
        let b = self.base.lookup(y)?;
        Ok(self.units_to_rational(self.dist_eta_units(a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use laakso_core::{build_graph, LaaksoParams};

    fn small(eta: Rational) -> EtaGraph {
        let g = build_graph(&LaaksoParams::new(2, vec![4, 4]).unwrap()).unwrap();
        EtaGraph::new(Arc::new(g), EtaSchedule::constant(eta, 1).unwrap()).unwrap()
    }

    #[test]
    fn half_contraction_on_small_graph() {
        let eg = small(Rational::new(1, 2));
        let z = LVertex::new(6, vec![1]);
        let w = LVertex::new(6, vec![2]);
        assert_eq!(eg.dist_eta(&z, &w).unwrap(), Rational::new(1, 8));
        assert_eq!(eg.base().dist(&z, &w).unwrap(), Rational::new(1, 4));
    }

    #[test]
    fn trivial_schedule_keeps_distances() {
        let eg = small(Rational::from_integer(1));
        let g = eg.base();
        for a in 0..g.vertex_count() as u32 {
            let de = eg.distances(Metric::Eta, &[a], None);
            let db = eg.distances(Metric::Base, &[a], None);
            assert_eq!(de, db);
        }
    }

    #[test]
    fn local_search_agrees_with_full_search() {
        let g = build_graph(&LaaksoParams::new(2, vec![4, 4, 4]).unwrap()).unwrap();
        let eg = EtaGraph::new(Arc::new(g), EtaSchedule::geometric(Rational::new(1, 2), 2).unwrap()).unwrap();
        for metric in [Metric::Base, Metric::Eta] {
            let cutoff = 5 * eg.scale();
            let full = eg.distances(metric, &[3, 40], Some(cutoff));
            let local = eg.local_distances(metric, &[3, 40], cutoff);
            for (v, d) in full.iter().enumerate() {
                assert_eq!(local.get(&(v as u32)).copied().unwrap_or(u64::MAX), *d);
            }
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(EtaSchedule::new(vec![Rational::from_integer(0)]).is_err());
        assert!(EtaSchedule::new(vec![Rational::new(3, 2)]).is_err());
        let p = EtaSchedule::power(0.5, 1.0, 4, 16).unwrap();
        assert_eq!(p.eta(4), Rational::new(1, 2));
        let geo = EtaSchedule::geometric(Rational::new(1, 2), 3).unwrap();
        assert_eq!(geo.common_denominator(3), 8);
    }
}
