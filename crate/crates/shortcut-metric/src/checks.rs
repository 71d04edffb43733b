//! Exact checks of the shortcut axioms and the contracted-metric constants.
//!
//! Every ratio is an exact rational formed from integer distances, so the
//! reports can be compared directly with the constants in [`crate::constants`].

use laakso_core::{Rational, VertexId};

use crate::constants::LAAKSO;
use crate::eta::{EtaGraph, Metric};
use crate::jump::jumps_within;

fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(num as i64, den as i64)
}

fn min_opt(acc: &mut Option<Rational>, r: Rational) {
    if acc.map_or(true, |a| r < a) {
        *acc = Some(r);
    }
}

fn max_opt(acc: &mut Option<Rational>, r: Rational) {
    if acc.map_or(true, |a| r > a) {
        *acc = Some(r);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemberDistanceReport {
    pub pairs: usize,
    /// Pairs whose base distance differs from `delta_i`.
    pub mismatches: usize,
}

/// Base distance between distinct members of a level-`i` set, compared with `delta_i`.
pub fn member_distances(eg: &EtaGraph) -> MemberDistanceReport {
    let g = eg.base();
    let mut pairs = 0;
    let mut mismatches = 0;
    for s in eg.sets() {
        let d = g.bfs_from(s.members[0]);
        let expected = g.params().scale_units(s.level);
        for (k, &a) in s.members.iter().enumerate() {
            let da = if k == 0 { d.clone() } else { g.bfs_from(a) };
            for &b in &s.members[k + 1..] {
                pairs += 1;
                if da[b as usize] as u64 != expected {
                    mismatches += 1;
                }
            }
        }
    }
    MemberDistanceReport { pairs, mismatches }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    pub pairs: usize,
    /// Least `d(S, S') / delta_j` over distinct sets with levels `i <= j`.
    pub base_min_ratio: Option<Rational>,
    /// Least `d_eta(S, S') / delta_j` over the same pairs.
    pub eta_min_ratio: Option<Rational>,
}

impl SeparationReport {
    pub fn holds(&self) -> bool {
        self.base_min_ratio.map_or(true, |r| r >= LAAKSO.b) && self.eta_min_ratio.map_or(true, |r| r >= LAAKSO.separation())
    }
}

/// Separation of distinct shortcut sets in both metrics, over every pair of sets.
pub fn separation(eg: &EtaGraph) -> SeparationReport {
    let sets = eg.sets();
    let mut base_min = None;
    let mut eta_min = None;
    let mut pairs = 0;
    for (k, s) in sets.iter().enumerate() {
        let db = eg.distances(Metric::Base, &s.members, None);
        let de = eg.distances(Metric::Eta, &s.members, None);
        for t in &sets[k + 1..] {
            let j = s.level.max(t.level);
            let delta = eg.scale_units(j);
            let b = t.members.iter().map(|&v| db[v as usize]).min().unwrap();
            let e = t.members.iter().map(|&v| de[v as usize]).min().unwrap();
            min_opt(&mut base_min, ratio(b, delta));
            min_opt(&mut eta_min, ratio(e, delta));
            pairs += 1;
        }
    }
    SeparationReport { pairs, base_min_ratio: base_min, eta_min_ratio: eta_min }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterReport {
    pub pairs: usize,
    /// Range of `d_eta(z, w) / (eta_i delta_i)` over member pairs.
    pub min_ratio: Option<Rational>,
    pub max_ratio: Option<Rational>,
}

impl DiameterReport {
    pub fn holds(&self) -> bool {
        self.min_ratio.map_or(true, |r| r >= LAAKSO.diameter())
            && self.max_ratio.map_or(true, |r| r <= Rational::from_integer(1))
    }
}

/// Contracted distances between members of the same set.
pub fn contracted_diameters(eg: &EtaGraph) -> DiameterReport {
    let mut lo = None;
    let mut hi = None;
    let mut pairs = 0;
    for (id, s) in eg.sets().iter().enumerate() {
        let chord = eg.chord_units(id);
        for (k, &a) in s.members.iter().enumerate() {
            let d = eg.distances(Metric::Eta, &[a], None);
            for &b in &s.members[k + 1..] {
                let r = ratio(d[b as usize], chord);
                min_opt(&mut lo, r);
                max_opt(&mut hi, r);
                pairs += 1;
            }
        }
    }
    DiameterReport { pairs, min_ratio: lo, max_ratio: hi }
}

/// Per level, the largest `d(v, U J_i) / delta_i` over all vertices.
pub fn net_ratios(eg: &EtaGraph) -> Vec<Rational> {
    let g = eg.base();
    (1..=eg.depth())
        .map(|i| {
            let sources: Vec<VertexId> = eg.sets_of_level(i).iter().flat_map(|s| s.members.iter().copied()).collect();
            let far = g.bfs_multi(&sources).into_iter().max().unwrap() as u64;
            ratio(far, g.params().scale_units(i))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MustBeJumpReport {
    pub pairs: usize,
    /// Pairs with `d_eta(x, y) >= d(x, y) / C`, which would admit a jump-free chain.
    pub direct_admissible: usize,
    /// Pairs where some jump of cost `<= C d_eta(x, y)` uses a different `(q_-, q_+)`.
    pub foreign_jumps: usize,
}

impl MustBeJumpReport {
    pub fn holds(&self) -> bool {
        self.direct_admissible == 0 && self.foreign_jumps == 0
    }
}

/// For `x` within `R eta_i delta_i` of `p_-` and `y` within `R eta_i delta_i` of `p_+`,
/// checks that every chain of cost at most `3 d_eta(x, y)` jumps across `(p_-, p_+)`.
pub fn must_be_jump(eg: &EtaGraph, set: usize, r: Rational) -> MustBeJumpReport {
    let s = &eg.sets()[set];
    let chord = eg.chord_units(set);
    let c = LAAKSO.single_jump();
    let (cn, cd) = (*c.numer() as u64, *c.denom() as u64);
    let within = |d: u64| d != u64::MAX && (d as i128) * (*r.denom() as i128) <= (*r.numer() as i128) * chord as i128;
    let mut report = MustBeJumpReport { pairs: 0, direct_admissible: 0, foreign_jumps: 0 };
    let balls: Vec<Vec<VertexId>> = s
        .members
        .iter()
        .map(|&p| {
            let d = eg.distances(Metric::Base, &[p], None);
            (0..d.len() as u32).filter(|&v| within(d[v as usize])).collect()
        })
        .collect();
    for (i, xs) in balls.iter().enumerate() {
        for (j, ys) in balls.iter().enumerate() {
            if i == j {
                continue;
            }
            for &x in xs {
                let de = eg.distances(Metric::Eta, &[x], None);
                for &y in ys {
                    report.pairs += 1;
                    let deta = de[y as usize];
                    let bound = deta * cn / cd;
                    if eg.dist_base_units(x, y) * cd <= deta * cn {
                        report.direct_admissible += 1;
                    }
                    let foreign = jumps_within(eg, x, y, bound)
                        .iter()
                        .any(|jp| jp.set != set || jp.from_index != i || jp.to_index != j);
                    if foreign {
                        report.foreign_jumps += 1;
                    }
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct FarSplitReport {
    pub ball_size: usize,
    /// The pieces `B_z(r)` cover `B_eta(S, r eta_i delta_i)`.
    pub covers: bool,
    /// `B_X(z, r eta_i delta_i) ⊆ B_z(r)` for every member.
    pub contains_inner: bool,
    /// Least `d_eta(B_z, B_z') / (eta_i delta_i)` over distinct members.
    pub eta_sep: Option<Rational>,
    /// Least `d(B_z, B_z') / delta_i` over distinct members.
    pub base_sep: Option<Rational>,
}

impl FarSplitReport {
    pub fn holds(&self) -> bool {
        let inv = Rational::from_integer(1) / LAAKSO.far_split();
        self.covers && self.contains_inner && self.eta_sep.map_or(true, |r| r >= inv) && self.base_sep.map_or(true, |r| r >= inv)
    }
}

/// Splits `B_eta(S, r eta_i delta_i)` into `B_z(r) = B_eta(S, r eta_i delta_i) ∩ B_X(z, C_0 r eta_i delta_i)`
/// and measures how far apart the pieces are.
pub fn far_split(eg: &EtaGraph, set: usize, r: Rational) -> FarSplitReport {
    let s = &eg.sets()[set];
    let chord = eg.chord_units(set) as i128;
    let (rn, rd) = (*r.numer() as i128, *r.denom() as i128);
    let c0 = LAAKSO.neighbourhood();
    let (c0n, c0d) = (*c0.numer() as i128, *c0.denom() as i128);
    let radius = (rn * chord / rd) as u64;
    let ball = eg.distances(Metric::Eta, &s.members, Some(radius));
    let in_ball: Vec<VertexId> = (0..ball.len() as u32).filter(|&v| ball[v as usize] != u64::MAX).collect();
    let mut pieces: Vec<Vec<VertexId>> = Vec::new();
    let mut contains_inner = true;
    for &z in &s.members {
        let d = eg.distances(Metric::Base, &[z], None);
        let piece: Vec<VertexId> =
            in_ball.iter().copied().filter(|&v| (d[v as usize] as i128) * rd * c0d <= c0n * rn * chord).collect();
        let inner = (0..d.len() as u32).filter(|&v| (d[v as usize] as i128) * rd <= rn * chord);
        for v in inner {
            if !piece.contains(&v) {
                contains_inner = false;
            }
        }
        pieces.push(piece);
    }
    let covers = in_ball.iter().all(|v| pieces.iter().any(|p| p.contains(v)));
    let mut eta_sep = None;
    let mut base_sep = None;
    let delta = eg.scale_units(s.level);
    for (k, p) in pieces.iter().enumerate() {
        let de = eg.distances(Metric::Eta, p, None);
        let db = eg.distances(Metric::Base, p, None);
        for q in &pieces[k + 1..] {
            let e = q.iter().map(|&v| de[v as usize]).min().unwrap_or(u64::MAX);
            let b = q.iter().map(|&v| db[v as usize]).min().unwrap_or(u64::MAX);
            min_opt(&mut eta_sep, ratio(e, chord as u64));
            min_opt(&mut base_sep, ratio(b, delta));
        }
    }
    FarSplitReport { ball_size: in_ball.len(), covers, contains_inner, eta_sep, base_sep }
}
