//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every criterion recomputes its quantity with an oracle written here from the
//! definitions (explicit quotients, a separate Dijkstra on the augmented graph,
//! closed-form edge energies, brute-force diamond labels) and compares it with
//! the library result. Both routes must agree and meet the pinned tolerances.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use diamond_graphs::{build_diamond, compute_p_g, project_laakso, restrict, DiamondGraph, Label};
use harmonic_energy::{cascade, collapse_sum, mcshane_map, EnergyCascade, EnergyConfig};
use laakso_core::{build_graph, Cube, LaaksoGraph, LaaksoParams, Rational, VertexId, WILDCARD};
use lipschitz_light::{class_partition, intervals, light_constant, sample_intervals, RGrid};
use lipschitz_maps::{bad_map_r2, orthogonal_step, tent_block, tent_units, Norm, PAMap};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use shortcut_metric::checks::{contracted_diameters, member_distances, must_be_jump, separation};
use shortcut_metric::constants::LAAKSO;
use shortcut_metric::{best_single_jump, density_profile, enumerate_shortcuts, schedule_blocks, EtaGraph, EtaSchedule, Metric};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn graph(m: u32, grid: Vec<u32>) -> Arc<LaaksoGraph> {
    Arc::new(build_graph(&LaaksoParams::new(m, grid).unwrap()).unwrap())
}

fn f64_of(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn words(m: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (1..=m).map(move |c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

fn subsets(max: usize) -> Vec<Vec<usize>> {
    (1u32..1 << max).map(|mask| (1..=max).filter(|&i| mask & (1 << (i - 1)) != 0).collect()).collect()
}

fn prefix_products(grid: &[u32]) -> Vec<u64> {
    let mut p = vec![1u64];
    for &n in grid {
        p.push(p.last().unwrap() * n as u64);
    }
    p
}

/// Dijkstra on the base graph plus one chord per ordered member pair of every set.
struct Augmented {
    adj: Vec<Vec<(VertexId, u64)>>,
}

impl Augmented {
    fn new(eg: &EtaGraph) -> Self {
        let g = eg.base();
        let mut adj = vec![Vec::new(); g.vertex_count()];
        for &[a, b] in g.edges() {
            adj[a as usize].push((b, eg.scale()));
            adj[b as usize].push((a, eg.scale()));
        }
        for (id, s) in eg.sets().iter().enumerate() {
            for &p in &s.members {
                for &q in &s.members {
                    if p != q {
                        adj[p as usize].push((q, eg.chord_units(id)));
                    }
                }
            }
        }
        Self { adj }
    }

    fn from(&self, sources: &[VertexId]) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.adj.len()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s as usize] = 0;
            heap.push(Reverse((0u64, s)));
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v as usize] {
                continue;
            }
            for &(w, c) in &self.adj[v as usize] {
                if d + c < dist[w as usize] {
                    dist[w as usize] = d + c;
                    heap.push(Reverse((d + c, w)));
                }
            }
        }
        dist
    }
}

/// Largest `|F(a) - F(b)|_2 / |a - b|` over edges.
fn edge_lip(f: &PAMap) -> f64 {
    let g = f.graph();
    let d = g.denom() as f64;
    g.edges()
        .iter()
        .map(|&[a, b]| f.value(a).iter().zip(f.value(b)).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt() * d)
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// 1. distance formula
// ---------------------------------------------------------------------------

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

/// Vertex classes of `{0..D} x [M]^n` after identifying words across each wormhole digit,
/// returned as a class per `(height, word)` and the adjacency of the classes.
fn quotient(m: u8, grid: &[u32]) -> (HashMap<(u64, Vec<u8>), usize>, Vec<BTreeSet<usize>>) {
    let n = grid.len() - 1;
    let p = prefix_products(grid);
    let d = p[grid.len()];
    let ws = words(m, n);
    let mut index = HashMap::new();
    let mut nodes = Vec::new();
    for h in 0..=d {
        for w in &ws {
            index.insert((h, w.clone()), nodes.len());
            nodes.push((h, w.clone()));
        }
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    for (id, (h, w)) in nodes.iter().enumerate() {
        for l in 1..=n {
            let unit = d / p[l];
            if *h == 0 || *h == d || h % unit != 0 || (h / unit) % grid[l - 1] as u64 == 0 {
                continue;
            }
            for c in 1..=m {
                let mut w2 = w.clone();
                w2[l - 1] = c;
                let (a, b) = (find(&mut parent, id), find(&mut parent, index[&(*h, w2)]));
                parent[a] = b;
            }
        }
    }
    let mut ids = HashMap::new();
    let mut class = HashMap::new();
    for (id, node) in nodes.iter().enumerate() {
        let r = find(&mut parent, id);
        let next = ids.len();
        class.insert(node.clone(), *ids.entry(r).or_insert(next));
    }
    let mut adj = vec![BTreeSet::new(); ids.len()];
    for (h, w) in &nodes {
        if *h < d {
            let (a, b) = (class[&(*h, w.clone())], class[&(*h + 1, w.clone())]);
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    (class, adj)
}

fn bfs_sets(adj: &[BTreeSet<usize>], s: usize) -> Vec<u64> {
    let mut dist = vec![u64::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if dist[w] == u64::MAX {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0usize;
    let mut counts = Vec::new();
    for grid in [vec![4, 4], vec![4, 4, 4]] {
        let g = graph(2, grid.clone());
        counts.push(g.vertex_count());
        let (class, adj) = quotient(2, &grid);
        ensure!(adj.len() == g.vertex_count(), "{grid:?}: quotient has {} classes, graph {}", adj.len(), g.vertex_count());
        let rep: Vec<usize> = (0..g.vertex_count() as VertexId)
            .map(|v| {
                let w: Vec<u8> = g.digits_of(v).iter().map(|&d| if d == WILDCARD { 1 } else { d }).collect();
                class[&(g.height(v), w)]
            })
            .collect();
        let denom = g.denom() as i64;
        for a in 0..g.vertex_count() as VertexId {
            let oracle = bfs_sets(&adj, rep[a as usize]);
            let (x, bfs) = (g.vertex(a), g.bfs_from(a));
            for b in a..g.vertex_count() as VertexId {
                let y = g.vertex(b);
                let formula = lib(g.dist_formula(&x, &y))?;
                let graph_dist = Rational::new(bfs[b as usize] as i64, denom);
                let quotient_dist = Rational::new(oracle[rep[b as usize]] as i64, denom);
                ensure!(formula == graph_dist && graph_dist == quotient_dist, "{grid:?} {x:?} {y:?}: formula {formula} graph {graph_dist} quotient {quotient_dist}");
                pairs += 1;
            }
        }
    }
    ensure!(counts[0] == 31, "N=(4,4) has {} vertices, expected 31", counts[0]);
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(10), "took {t:?}");
    Ok(format!("{pairs} pairs exact on {counts:?} vertices in {:.2}s (bound 10s)", t.as_secs_f64()))
}

// ---------------------------------------------------------------------------
// 2. shortcut constants
// ---------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let grids = [(2, vec![4, 4]), (2, vec![4, 4, 4]), (2, vec![4, 4, 4, 4]), (3, vec![4, 4, 4]), (2, vec![6, 4, 8])];
    let (mut base_min, mut eta_min): (Option<Rational>, Option<Rational>) = (None, None);
    let (mut diam_lo, mut diam_hi): (Option<Rational>, Option<Rational>) = (None, None);
    let mut runs = 0;
    for (m, grid) in grids {
        let g = graph(m, grid.clone());
        let n = g.depth();
        let schedules = [
            EtaSchedule::ones(n),
            EtaSchedule::constant(Rational::new(1, 2), n).unwrap(),
            EtaSchedule::geometric(Rational::new(1, 2), n).unwrap(),
            EtaSchedule::constant(Rational::new(1, 64), n).unwrap(),
        ];
        for sched in schedules {
            let eg = lib(EtaGraph::new(g.clone(), sched.clone()))?;
            let aug = Augmented::new(&eg);
            let sets = eg.sets();
            let l = eg.scale();
            let from_sets: Vec<Vec<u64>> = sets.iter().map(|s| aug.from(&s.members)).collect();
            for (k, s) in sets.iter().enumerate() {
                let delta = g.params().scale_units(s.level);
                for (a, &p) in s.members.iter().enumerate() {
                    let dp = aug.from(&[p]);
                    for &q in &s.members[a + 1..] {
                        ensure!(g.dist_formula_units(p, q) == delta, "{grid:?}: member distance {} vs delta {delta}", g.dist_formula_units(p, q));
                        let r = Rational::new(dp[q as usize] as i64, eg.chord_units(k) as i64);
                        diam_lo = Some(diam_lo.map_or(r, |x| x.min(r)));
                        diam_hi = Some(diam_hi.map_or(r, |x| x.max(r)));
                    }
                }
                for (k2, t) in sets.iter().enumerate().skip(k + 1) {
                    let j = s.level.max(t.level);
                    let delta_j = g.params().scale_units(j);
                    let base = s.members.iter().flat_map(|&p| t.members.iter().map(move |&q| (p, q))).map(|(p, q)| g.dist_formula_units(p, q)).min().unwrap();
                    let eta = t.members.iter().map(|&q| from_sets[k][q as usize]).min().unwrap();
                    ensure!(eta == s.members.iter().map(|&p| from_sets[k2][p as usize]).min().unwrap(), "asymmetric d_eta");
                    let rb = Rational::new(base as i64, delta_j as i64);
                    let re = Rational::new(eta as i64, (delta_j * l) as i64);
                    base_min = Some(base_min.map_or(rb, |x| x.min(rb)));
                    eta_min = Some(eta_min.map_or(re, |x| x.min(re)));
                    ensure!(rb >= LAAKSO.b && re >= LAAKSO.separation(), "{grid:?} {sched:?}: base {rb} eta {re}");
                }
            }
            ensure!(diam_lo.unwrap() >= LAAKSO.diameter() && diam_hi.unwrap() <= Rational::from_integer(1), "{grid:?} {sched:?}: chord ratios [{}, {}]", diam_lo.unwrap(), diam_hi.unwrap());
            ensure!(member_distances(&eg).mismatches == 0, "library member distances disagree");
            let sep = separation(&eg);
            ensure!(sep.holds(), "library separation {sep:?}");
            let diam = contracted_diameters(&eg);
            ensure!(diam.holds(), "library diameters {diam:?}");
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} graph/schedule runs: base sep {} (>= 1/2), d_eta sep {} (>= 1/6), chord ratio [{}, {}] (within [1/3, 1])",
        base_min.unwrap(),
        eta_min.unwrap(),
        diam_lo.unwrap(),
        diam_hi.unwrap()
    ))
}

// ---------------------------------------------------------------------------
// 3. single jump
// ---------------------------------------------------------------------------

/// Cheapest `d(x, p) + chord + d(q, y)` over all ordered member pairs, from closed-form distances.
fn single_jump_oracle(eg: &EtaGraph, x: VertexId, y: VertexId) -> (u64, Vec<(usize, usize, usize, u64)>) {
    let g = eg.base();
    let l = eg.scale();
    let mut best = u64::MAX;
    let mut all = Vec::new();
    for (id, s) in eg.sets().iter().enumerate() {
        let c = eg.chord_units(id);
        for (i, &p) in s.members.iter().enumerate() {
            let head = g.dist_formula_units(x, p) * l + c;
            for (j, &q) in s.members.iter().enumerate() {
                if i != j {
                    let cost = head + g.dist_formula_units(q, y) * l;
                    best = best.min(cost);
                    all.push((id, i, j, cost));
                }
            }
        }
    }
    (best, all)
}

fn criterion_3() -> Outcome {
    let g = graph(2, vec![4, 4, 4, 4]);
    let mut rng = SplitMix64::seed_from_u64(0x5eed_0003);
    let nv = g.vertex_count() as VertexId;
    let schedules = [
        EtaSchedule::constant(Rational::new(1, 2), 3).unwrap(),
        EtaSchedule::geometric(Rational::new(1, 2), 3).unwrap(),
        EtaSchedule::constant(Rational::new(1, 8), 3).unwrap(),
        EtaSchedule::constant(Rational::new(1, 64), 3).unwrap(),
    ];
    let (mut tested, mut worst) = (0usize, 0.0f64);
    for sched in &schedules {
        let eg = lib(EtaGraph::new(g.clone(), sched.clone()))?;
        let aug = Augmented::new(&eg);
        let mut here = 0;
        while here < 300 {
            let x = rng.gen_range(0..nv);
            let dx = aug.from(&[x]);
            let y = rng.gen_range(0..nv);
            let de = dx[y as usize];
            ensure!(de == eg.dist_eta_units(x, y), "d_eta routes disagree");
            if de >= g.dist_formula_units(x, y) * eg.scale() {
                continue;
            }
            let (oracle, _) = single_jump_oracle(&eg, x, y);
            let j = best_single_jump(&eg, x, y).ok_or("contracted pair without a jump")?;
            ensure!(j.cost == oracle, "best jump {} vs oracle {oracle}", j.cost);
            ensure!(j.cost as f64 <= 3.0 * de as f64 + 1e-9, "cost {} vs 3 d_eta {}", j.cost, 3 * de);
            worst = worst.max(j.cost as f64 / de as f64);
            here += 1;
        }
        tested += here;
    }
    ensure!(tested >= 1000, "only {tested} pairs");

    let eta = Rational::new(1, 64);
    let r = Rational::new(1, 4);
    ensure!(LAAKSO.single_jump() * (r + 1) * eta < LAAKSO.must_be_jump(), "threshold not met");
    let eg = lib(EtaGraph::new(g.clone(), EtaSchedule::constant(eta, 3).unwrap()))?;
    let aug = Augmented::new(&eg);
    let l = eg.scale();
    let mut forced = 0usize;
    for (id, s) in eg.sets().iter().enumerate() {
        let chord = eg.chord_units(id);
        let within = |p: VertexId| -> Vec<VertexId> {
            (0..nv).filter(|&v| (g.dist_formula_units(v, p) * l) as i128 * *r.denom() as i128 <= *r.numer() as i128 * chord as i128).collect()
        };
        let balls: Vec<Vec<VertexId>> = s.members.iter().map(|&p| within(p)).collect();
        for (i, xs) in balls.iter().enumerate() {
            for (j, ys) in balls.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &x in xs {
                    let dx = aug.from(&[x]);
                    for &y in ys {
                        let de = dx[y as usize];
                        ensure!(g.dist_formula_units(x, y) * l > 3 * de, "set {id}: a jump-free chain is admissible");
                        let (_, jumps) = single_jump_oracle(&eg, x, y);
                        let foreign = jumps.iter().filter(|&&(sid, a, b, c)| c <= 3 * de && (sid, a, b) != (id, i, j)).count();
                        ensure!(foreign == 0, "set {id}: {foreign} foreign jumps within 3 d_eta");
                        forced += 1;
                    }
                }
            }
        }
        ensure!(must_be_jump(&eg, id, r).holds(), "library must-be-jump fails on set {id}");
    }
    Ok(format!("{tested} contracted pairs, worst cost/d_eta {worst:.4} (bound 3); {forced} pairs forced through their own chord at eta 1/64, R 1/4"))
}

// ---------------------------------------------------------------------------
// 4. building blocks
// ---------------------------------------------------------------------------

fn tent_items(g: &Arc<LaaksoGraph>) -> Result<usize, String> {
    let n = g.depth();
    let eg = lib(EtaGraph::new(g.clone(), EtaSchedule::ones(n)))?;
    let mut checked = 0;
    for i in 1..=n {
        let t: Vec<i64> = (0..g.vertex_count() as VertexId).map(|v| tent_units(g, i, v)).collect();
        for s in eg.sets().iter().filter(|s| s.level <= i) {
            let vals: Vec<i64> = s.members.iter().map(|&v| t[v as usize]).collect();
            let spread = vals.iter().max().unwrap() - vals.iter().min().unwrap();
            let want = if s.level == i { g.params().scale_units(i) as i64 } else { 0 };
            ensure!(spread == want, "level {i}: spread {spread} on a level-{} set, want {want}", s.level);
        }
        let mut slopes: HashMap<(u64, Vec<u8>), i64> = HashMap::new();
        for &[a, b] in g.edges() {
            let (lo, hi) = if g.height(a) < g.height(b) { (a, b) } else { (b, a) };
            let k = if i < n { g.height(lo) / g.params().scale_units(i + 1) } else { g.height(lo) };
            let word = if g.wildcard(lo).is_none() { g.digits_of(lo) } else { g.digits_of(hi) };
            let slope = t[hi as usize] - t[lo as usize];
            ensure!(slope.abs() <= 1, "slope {slope}");
            let prev = *slopes.entry((k, word[..i].to_vec())).or_insert(slope);
            ensure!(prev == slope, "two slopes on one level-{} piece", i + 1);
        }
        let u = g.params().scale_units(i);
        for v in 0..g.vertex_count() as VertexId {
            if g.height(v) % u == 0 {
                ensure!(t[v as usize] == 0, "tent nonzero on the level-{i} grid");
            }
        }
        let lip = edge_lip(&lib(tent_block(g, i))?);
        ensure!((lip - 1.0).abs() <= 1e-12, "tent lip {lip}");
        checked += 1;
    }
    Ok(checked)
}

fn admissible(g: &Arc<LaaksoGraph>, i: usize, coef: &[f64]) -> PAMap {
    let d = g.denom() as f64;
    let mut values = vec![0.0; 2 * g.vertex_count()];
    for v in 0..g.vertex_count() as VertexId {
        let h = g.height(v) as f64 / d;
        values[2 * v as usize] = coef[0] * h;
        values[2 * v as usize + 1] = coef[1] * h;
        for j in 1..i {
            let tj = tent_units(g, j, v) as f64 / d;
            values[2 * v as usize] += coef[2 * j] * tj;
            values[2 * v as usize + 1] += coef[2 * j + 1] * tj;
        }
    }
    PAMap::new(g.clone(), 2, values, Norm::Euclidean).unwrap()
}

fn criterion_4() -> Outcome {
    let mut levels = 0;
    for g in [graph(2, vec![4, 4]), graph(2, vec![4, 4, 4, 4]), graph(3, vec![4, 6, 4]), graph(2, vec![6, 4, 8, 4])] {
        levels += tent_items(&g)?;
    }

    let g = graph(2, vec![4, 4, 4, 4]);
    let d = g.denom() as f64;
    let mut rng = SplitMix64::seed_from_u64(0x5eed_0004);
    let (mut steps, mut worst_identity, mut worst_lip) = (0, 0.0f64, f64::NEG_INFINITY);
    for i in 1..=3 {
        for amp in [0.25, 1.0, 1.7] {
            let coef: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = admissible(&g, i, &coef);
            let big = lib(orthogonal_step(&f, i, amp))?;
            let t = lib(tent_block(&g, i))?;
            for &[a, b] in g.edges() {
                let df: f64 = f.value(a).iter().zip(f.value(b)).map(|(x, y)| ((x - y) * d).powi(2)).sum();
                let dt = ((t.value(a)[0] - t.value(b)[0]) * d).powi(2);
                let dbig: f64 = big.value(a).iter().zip(big.value(b)).map(|(x, y)| ((x - y) * d).powi(2)).sum();
                let gap = (dbig - df - amp * amp * dt).abs() / (1.0 + df);
                worst_identity = worst_identity.max(gap);
            }
            let (l, lb) = (edge_lip(&f), edge_lip(&big));
            worst_lip = worst_lip.max(lb * lb - (l * l + amp * amp));
            steps += 1;
        }
    }
    ensure!(worst_identity <= 1e-9, "per-edge orthogonality off by {worst_identity}");
    ensure!(worst_lip <= 1e-9, "LIP(F)^2 exceeds L^2 + A^2 by {worst_lip}");

    let mut maps = 0;
    let mut worst_r2 = f64::NEG_INFINITY;
    for (grid, lv) in [(vec![4, 4, 4], vec![1, 2]), (vec![4, 4, 4, 4], vec![1, 2, 3]), (vec![4, 4, 4, 4, 4], vec![1, 3, 4]), (vec![6, 4, 4, 4], vec![2, 3])] {
        let g = graph(2, grid);
        let n = g.depth();
        for eta in [EtaSchedule::geometric(Rational::new(1, 2), n).unwrap(), EtaSchedule::power(0.6, 1.0, n, 4096).unwrap(), EtaSchedule::ones(n)] {
            let f = lib(bad_map_r2(&g, &lv, &eta))?;
            let bound: f64 = lv.iter().map(|&i| f64_of(eta.eta(i)).powi(2)).sum();
            let lip = edge_lip(&f);
            worst_r2 = worst_r2.max(lip * lip - bound);
            maps += 1;
        }
    }
    ensure!(worst_r2 <= 1e-12, "bad map LIP^2 exceeds sum eta^2 by {worst_r2}");
    Ok(format!(
        "tent block properties at {levels} levels; {steps} orthogonal steps, identity gap {worst_identity:.1e}, LIP^2 - (L^2 + A^2) <= {worst_lip:.1e}; {maps} bad maps, LIP^2 - sum eta^2 <= {worst_r2:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 5 and 6. harmonic cascade
// ---------------------------------------------------------------------------

struct EnergyOracle {
    denom: f64,
    weight: f64,
    prefix_len: Vec<usize>,
    scale_units: Vec<u64>,
    measure: Vec<f64>,
    /// Cube key per level and edge.
    keys: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

impl EnergyOracle {
    fn new(g: &LaaksoGraph) -> Self {
        let n = g.depth();
        let m = g.m() as usize;
        let d = g.denom();
        let p = prefix_products(g.params().grid());
        let mut keys = Vec::new();
        let mut counts = Vec::new();
        let mut measure = Vec::new();
        let mut scale_units = Vec::new();
        let mut prefix_len = Vec::new();
        for level in 0..=n + 1 {
            let u = d / p[level];
            let k = level.min(n);
            let mut map: HashMap<(u64, Vec<u8>), usize> = HashMap::new();
            let mut per = Vec::with_capacity(g.edge_count());
            for &[a, b] in g.edges() {
                let lo = if g.height(a) < g.height(b) { a } else { b };
                let word = if g.wildcard(a).is_none() { g.digits_of(a) } else { g.digits_of(b) };
                let key = (g.height(lo) / u, word[..k].to_vec());
                let next = map.len();
                per.push(*map.entry(key).or_insert(next));
            }
            counts.push(map.len());
            keys.push(per);
            measure.push(u as f64 / d as f64 / (m as f64).powi(k as i32));
            scale_units.push(u);
            prefix_len.push(k);
        }
        Self { denom: d as f64, weight: 1.0 / (d as f64 * (m as f64).powi(n as i32)), prefix_len, scale_units, measure, keys, counts }
    }

    /// `E_2` of `u - v` on every cube of a level; `v` may be absent.
    fn per_cube(&self, g: &LaaksoGraph, level: usize, u: &PAMap, v: Option<&PAMap>) -> Vec<f64> {
        let mut out = vec![0.0; self.counts[level]];
        for (e, &[a, b]) in g.edges().iter().enumerate() {
            let du: f64 = (0..u.dim())
                .map(|c| {
                    let x = u.value(a)[c] - v.map_or(0.0, |v| v.value(a)[c]);
                    let y = u.value(b)[c] - v.map_or(0.0, |v| v.value(b)[c]);
                    ((x - y) * self.denom).powi(2)
                })
                .sum();
            out[self.keys[level][e]] += du * self.weight;
        }
        out
    }
}

fn free_perturbation(g: &LaaksoGraph, u: &PAMap, unit: u64, amp: f64, rng: &mut SplitMix64) -> PAMap {
    let mut values = u.values().to_vec();
    let dim = u.dim();
    for v in 0..g.vertex_count() as VertexId {
        let h = g.height(v);
        if h % unit != 0 || h == 0 || h == g.denom() {
            for c in 0..dim {
                values[v as usize * dim + c] += amp * rng.gen_range(-1.0..1.0);
            }
        }
    }
    PAMap::new(u.graph().clone(), dim, values, Norm::Euclidean).unwrap()
}

fn criterion_5() -> Outcome {
    let g = graph(2, vec![4, 4, 4, 4, 4]);
    let n = g.depth();
    let cfg = EnergyConfig::quadratic();
    ensure!(cfg.q == 2.0 && cfg.k_q == 1.0, "config is not q = 2, K = 1");
    let oracle = EnergyOracle::new(&g);
    for level in 0..=n + 1 {
        ensure!(oracle.counts[level] == g.cube_count(level), "level {level}: {} cubes seen", oracle.counts[level]);
        ensure!(oracle.prefix_len[level] == g.prefix_len(level), "prefix length");
    }
    let mut rng = SplitMix64::seed_from_u64(0x5eed_0005);
    let start = Instant::now();
    let (mut worst_var, mut worst_excess, mut worst_lib) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..20 {
        let f = lib(mcshane_map(&g, 4, &mut rng))?;
        let lip = edge_lip(&f);
        ensure!((lip - 1.0).abs() <= 1e-9, "random map has LIP {lip}");
        let c = lib(cascade(&f, &cfg, true))?;
        worst_lib = worst_lib.max(c.max_excess());
        let mut maps: Vec<&PAMap> = c.maps.iter().collect();
        maps.push(&f);
        for level in 0..=n + 1 {
            let u = &c.maps[level];
            let eu = oracle.per_cube(&g, level, u, None);
            let mut competitors = vec![f.clone()];
            for k in 0..2 {
                competitors.push(free_perturbation(&g, u, oracle.scale_units[level], 0.01 * (k + 1) as f64, &mut rng));
            }
            for v in &competitors {
                let ev = oracle.per_cube(&g, level, v, None);
                let ed = oracle.per_cube(&g, level, u, Some(v));
                for q in 0..eu.len() {
                    worst_var = worst_var.max(eu[q] + 0.5 * ed[q] - ev[q]);
                }
            }
            let mut cumulative = vec![0.0; oracle.counts[level]];
            for i in level..=n + 1 {
                for (q, e) in oracle.per_cube(&g, level, maps[i + 1], Some(maps[i])).into_iter().enumerate() {
                    cumulative[q] += e;
                }
            }
            let bound = 2.0 * lip * lip * oracle.measure[level];
            for x in cumulative {
                worst_excess = worst_excess.max(x - bound);
            }
        }
    }
    let t = start.elapsed();
    ensure!(worst_var <= 1e-9, "variational inequality violated by {worst_var}");
    ensure!(worst_excess <= 1e-8, "telescoped sum exceeds 2 mu(Q) by {worst_excess}");
    ensure!(worst_lib <= 1e-8, "library excess {worst_lib}");
    ensure!(t < Duration::from_secs(120), "took {t:?}");
    Ok(format!(
        "20 maps at n = 4: worst variational violation {worst_var:.1e} (<= 1e-9), worst sum - 2 mu(Q) {worst_excess:.1e} (<= 1e-8), library {worst_lib:.1e}, {:.1}s (bound 120s)",
        t.as_secs_f64()
    ))
}

fn symmetry_and_gates(g: &Arc<LaaksoGraph>, c: &EnergyCascade, f: &PAMap) -> Result<(usize, f64), String> {
    let n = g.depth();
    let m = g.m() as u8;
    let mut compared = 0;
    for i in 1..=n {
        let u = g.params().scale_units(i);
        let map = &c.maps[i];
        for k in 0..g.denom() / u {
            let gated = g.wildcard_at(k * u) == Some(i) && g.wildcard_at((k + 1) * u) == Some(i);
            if !gated {
                continue;
            }
            for h in k * u + 1..(k + 1) * u {
                for v in g.vertices_at(h) {
                    let mut w = g.digits_of(v).to_vec();
                    for d in 1..=m {
                        w[i - 1] = d;
                        let t = lib(g.lookup(&laakso_core::LVertex::new(h, w.clone())))?;
                        ensure!(map.value(t) == map.value(v), "F_{i} differs across digit {i} at height {h}");
                        compared += 1;
                    }
                }
            }
        }
    }
    let fams = lib(enumerate_shortcuts(g))?;
    let mut worst = 0.0f64;
    for fam in &fams {
        let i = fam.level;
        for s in &fam.sets {
            let first = c.maps[i].value(s.members[0]);
            ensure!(s.members.iter().all(|&p| c.maps[i].value(p) == first), "F_{i} not constant on a level-{i} set");
            let spread = |vals: &dyn Fn(VertexId) -> f64| {
                let xs: Vec<f64> = s.members.iter().map(|&p| vals(p)).collect();
                xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min)
            };
            let diff = spread(&|p| c.maps[i + 1].value(p)[0] - c.maps[i].value(p)[0]);
            let target = spread(&|p| f.value(p)[0]);
            worst = worst.max((diff - target).abs());
        }
    }
    ensure!(worst <= 1e-12, "gate identity off by {worst}");
    ensure!(lib(c.gate_defect(&fams))? <= 1e-12, "library gate defect");
    for i in 1..=n {
        ensure!(lib(c.symmetry_defect(i))? == 0.0, "library symmetry defect at {i}");
    }
    Ok((compared, worst))
}

fn criterion_6() -> Outcome {
    let cfg = EnergyConfig::quadratic();
    let mut rng = SplitMix64::seed_from_u64(0x5eed_0006);
    let (mut compared, mut worst, mut runs) = (0, 0.0f64, 0);
    for g in [graph(2, vec![4, 4, 4, 4]), graph(3, vec![4, 4, 4]), graph(2, vec![4, 6, 4, 8])] {
        for _ in 0..4 {
            let f = lib(mcshane_map(&g, 4, &mut rng))?;
            let c = lib(cascade(&f, &cfg, true))?;
            let (k, w) = symmetry_and_gates(&g, &c, &f)?;
            compared += k;
            worst = worst.max(w);
            runs += 1;
        }
    }
    Ok(format!("{runs} cascades: {compared} mirrored values equal exactly, gate identity within {worst:.1e} (<= 1e-12)"))
}

// ---------------------------------------------------------------------------
// 7. collapse at gates
// ---------------------------------------------------------------------------

fn collapse_oracle(g: &LaaksoGraph, f: &PAMap, s: f64) -> Result<(usize, f64), String> {
    let lip = edge_lip(f);
    let mut sum = 0.0;
    let mut sets = 0;
    for fam in lib(enumerate_shortcuts(g))? {
        for set in &fam.sets {
            let xs: Vec<f64> = set.members.iter().map(|&p| f.value(p)[0]).collect();
            let diam = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
            sum += diam.powf(s);
            sets += 1;
        }
    }
    Ok((sets, sum / lip.powf(s)))
}

fn criterion_7() -> Outcome {
    let whole = Cube { level: 0, interval: 0, prefix: vec![] };
    let mut rng = SplitMix64::seed_from_u64(0x5eed_0007);
    let mut maxima = Vec::new();
    for n in [3, 4, 5] {
        let g = Arc::new(lib(build_graph(&lib(LaaksoParams::constant(2, 4, n))?))?);
        let fams = lib(enumerate_shortcuts(&g))?;
        let s = g.params().dimension().s;
        ensure!((s - 1.5).abs() < 1e-15, "dimension {s}");
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = lib(mcshane_map(&g, 4, &mut rng))?;
            let (sets, ratio) = collapse_oracle(&g, &f, s)?;
            let rep = lib(collapse_sum(&f, &fams, &whole, s))?;
            ensure!(rep.sets == sets, "set counts {} vs {sets}", rep.sets);
            ensure!((rep.ratio - ratio).abs() <= 1e-9 * (1.0 + ratio), "ratio {} vs oracle {ratio}", rep.ratio);
            worst = worst.max(ratio);
        }
        maxima.push(worst);
    }
    ensure!(maxima[2] <= 2.0 * maxima[0], "max ratio grows: {maxima:?}");

    let g = graph(2, vec![4, 4]);
    let t = lib(tent_block(&g, 1))?;
    let rep = lib(collapse_sum(&t, &lib(enumerate_shortcuts(&g))?, &whole, 1.5))?;
    // Two level-1 sets, each of diameter 1/4 under a unit-Lipschitz tent: 2 (1/4)^(3/2) = 1/4.
    let expected = 2.0 * 0.25f64.powf(1.5);
    ensure!(expected == 0.25 && rep.ratio == expected && rep.sum == expected, "tent value {} (sum {})", rep.ratio, rep.sum);
    Ok(format!("max ratio over 100 maps at n = 3, 4, 5: {:.4}, {:.4}, {:.4} (n=5 <= 2 x n=3); tent value {}", maxima[0], maxima[1], maxima[2], rep.ratio))
}

// ---------------------------------------------------------------------------
// 8. diamond graphs
// ---------------------------------------------------------------------------

fn even_grids(depth: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|g: Vec<u32>| {
                [4u32, 6, 8].into_iter().map(move |n| {
                    let mut g2 = g.clone();
                    g2.push(n);
                    g2
                })
            })
            .collect();
    }
    out
}

/// Nearest points of `W_{<=l}` below and above `t`, in units of `1/P`.
fn xy(grid: &[u32], t: u64, l: usize) -> (u64, u64) {
    let p = prefix_products(grid);
    let total = p[grid.len()];
    if l == 0 {
        return (0, total);
    }
    if l > grid.len() {
        return (t, t);
    }
    let unit = total / p[l];
    (t / unit * unit, t.div_ceil(unit) * unit)
}

fn p_g_oracle(grid: &[u32]) -> usize {
    let n = grid.len();
    let total: u64 = grid.iter().map(|&x| x as u64).product();
    (1..=n + 1)
        .find(|&p| {
            (0..=total).all(|t| {
                (0..n).all(|j| {
                    let (x, y) = xy(grid, t, j);
                    let (xp, yp) = xy(grid, t, j + p);
                    (2 * t < x + y || 2 * xp >= x + y) && (2 * t > x + y || 2 * yp <= x + y)
                })
            })
        })
        .unwrap()
}

fn brute_diamond(m: u8, grid: &[u32]) -> (Vec<Label>, Vec<(Label, Label)>) {
    let p = prefix_products(grid);
    let total = p[grid.len()];
    let level = |t: u64| (1..=grid.len()).find(|&l| t % (total / p[l]) == 0).unwrap();
    let vertices: Vec<Label> = (0..=total).flat_map(|t| words(m, level(t) - 1).into_iter().map(move |w| (t, w))).collect();
    let mut edges = Vec::new();
    for a in &vertices {
        for b in &vertices {
            if b.0 == a.0 + 1 && (a.1.starts_with(&b.1) || b.1.starts_with(&a.1)) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    let mut vertices = vertices;
    vertices.sort();
    edges.sort();
    (vertices, edges)
}

/// Grid obtained by keeping only the level cuts in `levels`.
fn merged_grid(grid: &[u32], levels: &[usize]) -> Vec<u32> {
    let mut cuts = levels.to_vec();
    cuts.push(grid.len());
    let mut out = Vec::new();
    let mut start = 0;
    for c in cuts {
        out.push(grid[start..c].iter().product());
        start = c;
    }
    out
}

fn diamond_bfs(d: &DiamondGraph, s: u32) -> Vec<u64> {
    let mut dist = vec![u64::MAX; d.vertex_count()];
    dist[s as usize] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in d.neighbors(v) {
            if dist[w as usize] == u64::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

fn criterion_8() -> Outcome {
    let mut grids = 0;
    for depth in 1..=3 {
        for grid in even_grids(depth) {
            let lib_p = lib(compute_p_g(&grid))?;
            let oracle = p_g_oracle(&grid);
            ensure!(lib_p == 1 && oracle == 1, "{grid:?}: p_G {lib_p}, oracle {oracle}");
            grids += 1;
        }
    }

    let mut restrictions = 0;
    for (m, grid) in [(2u32, vec![4u32, 4]), (2, vec![4, 4, 4]), (3, vec![4, 6, 4]), (2, vec![6, 4, 8])] {
        let d = lib(build_diamond(m, &grid))?;
        for levels in subsets(grid.len() - 1) {
            let r = lib(restrict(&d, &levels))?;
            let merged = merged_grid(&grid, &levels);
            ensure!(r.graph.grid() == merged.as_slice(), "{grid:?} I {levels:?}: grid {:?} vs {merged:?}", r.graph.grid());
            let (vertices, edges) = brute_diamond(m as u8, &merged);
            ensure!(r.graph.labels() == vertices && r.graph.edge_labels() == edges, "{grid:?} I {levels:?}: labels differ");
            ensure!(r.is_homomorphism(&d), "{grid:?} I {levels:?}: not a homomorphism");
            let image: BTreeSet<u32> = r.projection.iter().copied().collect();
            ensure!(image.len() == r.graph.vertex_count(), "projection not onto");
            restrictions += 1;
        }
    }

    let mut pairs = 0;
    for (m, grid) in [(2, vec![4, 4]), (2, vec![4, 4, 4]), (3, vec![4, 6, 4]), (2, vec![4, 4, 4, 4])] {
        let g = graph(m, grid.clone());
        let fams = lib(enumerate_shortcuts(&g))?;
        for levels in subsets(g.depth()) {
            let proj = lib(project_laakso(&g, &levels))?;
            let dg = &proj.diamond;
            ensure!(dg.denom() == g.denom(), "edge lengths differ");
            for &[a, b] in g.edges() {
                let (x, y) = (proj.map[a as usize], proj.map[b as usize]);
                ensure!(x == y || dg.is_edge(x, y), "{grid:?} I {levels:?}: an edge stretches");
            }
            ensure!(proj.is_one_lipschitz(&g), "library 1-Lipschitz check fails");
            for fam in &fams {
                let want = if levels.contains(&fam.level) { g.params().scale_units(fam.level) } else { 0 };
                for s in &fam.sets {
                    let dist = diamond_bfs(dg, proj.map[s.members[0] as usize]);
                    for &q in &s.members[1..] {
                        let got = dist[proj.map[q as usize] as usize];
                        ensure!(got == want, "{grid:?} I {levels:?} level {}: image distance {got}, want {want}", fam.level);
                        pairs += 1;
                    }
                }
            }
            ensure!(proj.pair_images(&g, &fams).iter().all(|p| p.matches()), "library dichotomy fails");
        }
    }
    Ok(format!("p_G = 1 on {grids} grids; {restrictions} restrictions match canonical labels; {pairs} jump pairs follow the dichotomy"))
}

// ---------------------------------------------------------------------------
// 9. Lipschitz light
// ---------------------------------------------------------------------------

fn criterion_9() -> Outcome {
    let g = Arc::new(lib(build_graph(&lib(LaaksoParams::constant(2, 4, 3))?))?);
    let schedules = [
        EtaSchedule::ones(3),
        EtaSchedule::geometric(Rational::new(1, 2), 3).unwrap(),
        EtaSchedule::constant(Rational::new(1, 8), 3).unwrap(),
    ];
    let (mut sep_min, mut diam_max): (Option<Rational>, Rational) = (None, Rational::from_integer(0));
    let mut partitions = 0;
    for sched in schedules {
        let eg = lib(EtaGraph::new(g.clone(), sched))?;
        let aug = Augmented::new(&eg);
        let table: Vec<Vec<u64>> = (0..g.vertex_count() as VertexId).map(|v| aug.from(&[v])).collect();
        for level in 2..=g.depth() + 1 {
            for iv in lib(intervals(&g, level))? {
                let p = lib(class_partition(&eg, &iv))?;
                let len = iv.length_units(&g) * eg.scale();
                ensure!(p.interval_units == len, "|I| {} vs {len}", p.interval_units);
                let (lo, hi) = iv.bounds(&g);
                let pre: BTreeSet<VertexId> = (0..g.vertex_count() as VertexId).filter(|&v| (lo..=hi).contains(&g.height(v))).collect();
                let union: BTreeSet<VertexId> = p.members.iter().flatten().copied().collect();
                ensure!(union == pre && union.len() == p.members.iter().map(Vec::len).sum::<usize>(), "classes do not partition the preimage");
                let mut sep: Option<u64> = None;
                let mut diam = 0u64;
                for (a, ca) in p.members.iter().enumerate() {
                    for &x in ca {
                        let row = &table[x as usize];
                        for &y in ca {
                            diam = diam.max(row[y as usize]);
                        }
                        for cb in &p.members[a + 1..] {
                            let d = cb.iter().map(|&y| row[y as usize]).min().unwrap();
                            sep = Some(sep.map_or(d, |s| s.min(d)));
                        }
                    }
                }
                ensure!(sep == p.separation && diam == p.max_diameter, "oracle sep {sep:?} diam {diam} vs {:?} {}", p.separation, p.max_diameter);
                if let Some(s) = sep {
                    ensure!(3 * s >= len, "separation {s} below |I|/3 = {len}/3");
                    let r = Rational::new(s as i64, len as i64);
                    sep_min = Some(sep_min.map_or(r, |x| x.min(r)));
                }
                ensure!(diam <= 5 * len, "diameter {diam} above 5|I| = {}", 5 * len);
                diam_max = diam_max.max(Rational::new(diam as i64, len as i64));
                partitions += 1;
            }
        }
    }

    let mut constants = Vec::new();
    for n in 2..=4 {
        let g = Arc::new(lib(build_graph(&lib(LaaksoParams::constant(2, 4, n))?))?);
        let eg = lib(EtaGraph::new(g.clone(), EtaSchedule::geometric(Rational::new(1, 2), n).unwrap()))?;
        let iv = lib(sample_intervals(&g, 2..=n + 1, 4))?;
        let c = lib(light_constant(&eg, &iv, RGrid::default()))?.constant;
        ensure!(c.is_finite() && c >= 1.0, "light constant {c} at n = {n}");
        constants.push(c);
    }
    let (lo, hi) = constants.iter().fold((f64::MAX, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    ensure!(hi <= 2.0 * lo, "light constants vary beyond 2x: {constants:?}");
    Ok(format!(
        "{partitions} partitions over 3 schedules: min separation {} |I| (>= 1/3), max diameter {} |I| (<= 5); light constants {constants:?} at n = 2, 3, 4",
        sep_min.unwrap(),
        diam_max
    ))
}

// ---------------------------------------------------------------------------
// 10. density dichotomy surrogate
// ---------------------------------------------------------------------------

/// Vertex weight covered by the `alpha_i delta_i` neighbourhoods of levels `i0..=n`, by closed-form distances.
fn coverage_oracle(eg: &EtaGraph, alpha: &[f64]) -> Vec<u64> {
    let g = eg.base();
    let n = g.depth();
    let mut covered = vec![false; g.vertex_count()];
    let mut out = vec![0; n];
    let mut acc = 0;
    for i in (1..=n).rev() {
        let members: Vec<VertexId> = eg.sets_of_level(i).iter().flat_map(|s| s.members.iter().copied()).collect();
        let radius = alpha[i - 1] * g.params().scale_units(i) as f64;
        for v in 0..g.vertex_count() as VertexId {
            if !covered[v as usize] && members.iter().any(|&p| g.dist_formula_units(v, p) as f64 <= radius) {
                covered[v as usize] = true;
                acc += g.degree(v) as u64;
            }
        }
        out[i - 1] = acc;
    }
    out
}

fn criterion_10() -> Outcome {
    let s = 1.5f64;
    let mut margins = Vec::new();
    for n in 2..=5 {
        let g = Arc::new(lib(build_graph(&lib(LaaksoParams::constant(2, 4, n))?))?);
        let eg = lib(EtaGraph::new(g.clone(), EtaSchedule::geometric(Rational::new(1, 2), n).unwrap()))?;
        let divergent: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-1.0 / s)).collect();
        let convergent: Vec<f64> = (1..=n).map(|i| 2f64.powf(-(i as f64))).collect();
        for metric in [Metric::Base, Metric::Eta] {
            let a = lib(density_profile(&eg, &divergent, metric))?;
            let b = lib(density_profile(&eg, &convergent, metric))?;
            if metric == Metric::Base && n <= 4 {
                ensure!(a.cumulative_weight == coverage_oracle(&eg, &divergent), "n = {n}: divergent coverage differs from oracle");
                ensure!(b.cumulative_weight == coverage_oracle(&eg, &convergent), "n = {n}: convergent coverage differs from oracle");
            }
            for i0 in 0..n {
                ensure!(a.cumulative_weight[i0] > b.cumulative_weight[i0], "n = {n} {metric:?} from level {}: {} vs {}", i0 + 1, a.cumulative_weight[i0], b.cumulative_weight[i0]);
            }
            margins.push(a.cumulative_weight[0] as f64 / b.cumulative_weight[0] as f64);
        }
    }

    let alpha: Vec<f64> = (1..=1_000_000).map(|i| 1.0 / i as f64).collect();
    let (p, sigma) = (2.0, 1.0);
    let r = lib(schedule_blocks(&alpha, p, sigma))?;
    let mut seen = vec![false; alpha.len() + 1];
    let mut power_series = 0.0;
    for (k, block) in r.blocks.iter().enumerate() {
        let sum: f64 = block.iter().map(|&i| alpha[i - 1]).sum();
        let pow: f64 = block.iter().map(|&i| alpha[i - 1].powf(p)).sum();
        for &i in block {
            ensure!(!seen[i], "index {i} reused");
            seen[i] = true;
        }
        ensure!((sum - r.block_sums[k]).abs() <= 1e-9 && (pow - r.block_power_sums[k]).abs() <= 1e-12, "block {k} sums disagree");
        if k + 1 < r.blocks.len() {
            ensure!(sum >= 0.5 - 1e-12, "complete block {k} sums to {sum}");
        }
        power_series += pow.powf(sigma);
    }
    let bound = 1.5f64.powf(p * sigma);
    ensure!(power_series <= bound, "power series {power_series} above {bound}");
    ensure!(r.diverging, "selected mass does not keep growing");
    let sums: Vec<f64> = r.checkpoints.iter().map(|c| c.block_sum).collect();
    ensure!(sums.windows(2).all(|w| w[1] >= w[0]) && sums.last() > sums.get(2), "block sums stall: {sums:?}");
    ensure!(r.checkpoints.iter().all(|c| c.power_series <= bound), "a checkpoint exceeds the power bound");
    let (lo, hi) = margins.iter().fold((f64::MAX, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
    Ok(format!(
        "divergent/convergent coverage ratio in [{lo:.3}, {hi:.3}] for n = 2..5, both metrics; 1/i up to 1e6: {} blocks, sums at checkpoints {:?}, power series {power_series:.4} (<= {bound})",
        r.blocks.len(),
        sums.iter().map(|s| format!("{s:.2}")).collect::<Vec<_>>()
    ))
}

// ---------------------------------------------------------------------------
// 11. determinism of `lab verify`
// ---------------------------------------------------------------------------

fn criterion_11() -> Outcome {
    let root = lib(tempfile::tempdir())?;
    let run = |name: &str| -> Result<(Vec<u8>, Vec<u8>, Duration), String> {
        let start = Instant::now();
        let out = lib(Command::new(env!("CARGO_BIN_EXE_lab")).args(["verify", "--seed", "1", "--output", name]).env("LAB_OUTPUT_ROOT", root.path()).output())?;
        let t = start.elapsed();
        ensure!(out.status.code() == Some(0), "lab verify exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stdout));
        let csv = lib(std::fs::read(Path::new(root.path()).join(name).join("verify.csv")))?;
        Ok((out.stdout, csv, t))
    };
    let (out_a, csv_a, ta) = run("a")?;
    let (out_b, csv_b, tb) = run("b")?;
    ensure!(out_a == out_b, "stdout differs between runs");
    ensure!(csv_a == csv_b, "verify.csv differs between runs");
    let slowest = ta.max(tb);
    ensure!(slowest < Duration::from_secs(600), "suite took {slowest:?}");
    let checks = String::from_utf8_lossy(&out_a).lines().filter(|l| l.starts_with("PASS")).count();
    Ok(format!("{checks} checks, stdout and verify.csv byte-identical over two runs, slowest {:.1}s (bound 600s)", slowest.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("distance-formula", criterion_1),
        ("shortcut-constants", criterion_2),
        ("single-jump", criterion_3),
        ("building-blocks", criterion_4),
        ("harmonic-cascade", criterion_5),
        ("symmetry-gates", criterion_6),
        ("collapse-sum", criterion_7),
        ("diamond-graphs", criterion_8),
        ("lipschitz-light", criterion_9),
        ("density-dichotomy", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
