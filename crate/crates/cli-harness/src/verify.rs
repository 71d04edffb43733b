//! `lab verify`: the invariant suite of every module at small default parameters.
//!
//! Graph depths are capped by `depth`; at cap 1 every module still runs at
//! least one check. Random samples come from one SplitMix64 stream per check,
//! seeded from the suite seed and the check index, so output is reproducible.

use std::collections::HashMap;
use std::sync::Arc;

use diamond_graphs::{build_diamond, compute_p_g, project_laakso, restrict};
use harmonic_energy::{cascade, collapse_sum, edge_energies, mcshane_map, EnergyConfig};
use laakso_core::{build_graph, Cube, LaaksoGraph, LaaksoParams, Rational, VertexId};
use lipschitz_light::{basic_separation, basic_separation_pairs, class_partition, intervals, light_constant, member_pairs, sample_intervals, RGrid};
use lipschitz_maps::{bad_map_r2, orthogonal_step, tent_block, tent_units, Norm, PAMap};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use shortcut_metric::checks::{contracted_diameters, member_distances, must_be_jump, separation};
use shortcut_metric::constants::LAAKSO;
use shortcut_metric::{best_single_jump, density_profile, enumerate_shortcuts, schedule_blocks, EtaGraph, EtaSchedule, Metric};

use crate::error::Result;
use crate::table::{rat, rat_opt, real, Table};

pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub depth: usize,
    pub seed: u64,
    /// Shortens the chord of the first shortcut set to one unit before the separation checks.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { depth: DEFAULT_DEPTH, seed: DEFAULT_SEED, inject_fault: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub measured: String,
    pub bound: String,
    pub passed: bool,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!("{} {}/{}: {} (bound {})", if self.passed { "PASS" } else { "FAIL" }, self.module, self.name, self.measured, self.bound)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new("verify.csv", &["module", "check", "measured", "bound", "passed"]);
        for c in &self.checks {
            t.row(&[&c.module, &c.name, &c.measured.replace(',', ";"), &c.bound.replace(',', ";"), &c.passed]);
        }
        t
    }
}

struct Suite {
    opts: VerifyOptions,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, module: &'static str, name: &'static str, measured: String, bound: impl Into<String>, passed: bool) {
        self.checks.push(CheckResult { module, name, measured, bound: bound.into(), passed });
    }

    fn rng(&self) -> SplitMix64 {
        SplitMix64::seed_from_u64(self.opts.seed ^ (self.checks.len() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

fn laakso(depth: usize) -> Result<Arc<LaaksoGraph>> {
    Ok(Arc::new(build_graph(&LaaksoParams::constant(2, 4, depth)?)?))
}

fn schedules(depth: usize) -> Result<Vec<EtaSchedule>> {
    Ok(vec![
        EtaSchedule::ones(depth),
        EtaSchedule::geometric(Rational::new(1, 2), depth)?,
        EtaSchedule::constant(Rational::new(1, 8), depth)?,
    ])
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn min_rat(acc: Option<Rational>, r: Option<Rational>) -> Option<Rational> {
    match (acc, r) {
        (Some(a), Some(b)) => Some(if b < a { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn max_rat(acc: Option<Rational>, r: Option<Rational>) -> Option<Rational> {
    match (acc, r) {
        (Some(a), Some(b)) => Some(if b > a { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn nonempty_subsets(max: usize) -> Vec<Vec<usize>> {
    (1u32..1 << max).map(|mask| (1..=max).filter(|&i| mask & (1 << (i - 1)) != 0).collect()).collect()
}

pub fn verify_all(opts: VerifyOptions) -> Result<VerifyReport> {
    let depth = opts.depth.max(1);
    let mut s = Suite { opts, checks: Vec::new() };
    let d2 = depth.min(2);
    let d3 = depth.min(3);
    core_checks(&mut s, d2)?;
    shortcut_checks(&mut s, d3)?;
    map_checks(&mut s, d3)?;
    energy_checks(&mut s, d3)?;
    diamond_checks(&mut s, d3)?;
    light_checks(&mut s, d3)?;
    Ok(VerifyReport { checks: s.checks })
}

fn core_checks(s: &mut Suite, depth: usize) -> Result<()> {
    let g = laakso(depth)?;
    let nv = g.vertex_count() as VertexId;
    let mut pairs = 0usize;
    let mut bad = 0usize;
    for a in 0..nv {
        let d = g.bfs_from(a);
        for b in a..nv {
            pairs += 1;
            bad += usize::from(d[b as usize] as u64 != g.dist_formula_units(a, b));
        }
    }
    s.push("laakso-core", "dist-formula", format!("{bad} mismatches over {pairs} pairs at n = {depth}"), "0", bad == 0);
    let mut off = 0;
    for level in 0..=g.depth() + 1 {
        let total: Rational = g.cubes(level)?.iter().map(|q| g.cube_measure(q)).sum();
        off += usize::from(total != Rational::from_integer(1));
    }
    s.push("laakso-core", "cube-measures", format!("{off} levels with total measure != 1"), "0", off == 0);
    Ok(())
}

fn shortcut_checks(s: &mut Suite, depth: usize) -> Result<()> {
    let g = laakso(depth)?;
    let md = member_distances(&EtaGraph::new(g.clone(), EtaSchedule::ones(depth))?);
    s.push("shortcut-metric", "member-distance", format!("{} mismatches over {} pairs", md.mismatches, md.pairs), "0", md.mismatches == 0);

    let (mut base, mut eta, mut lo, mut hi) = (None, None, None, None);
    let mut fault_violations = 0;
    for (k, sched) in schedules(depth)?.into_iter().enumerate() {
        let mut eg = EtaGraph::new(g.clone(), sched)?;
        if s.opts.inject_fault && k == 0 {
            eg.set_chord_units(0, 1);
        }
        let sep = separation(&eg);
        base = min_rat(base, sep.base_min_ratio);
        eta = min_rat(eta, sep.eta_min_ratio);
        let diam = contracted_diameters(&eg);
        lo = min_rat(lo, diam.min_ratio);
        hi = max_rat(hi, diam.max_ratio);
        fault_violations += basic_separation_pairs(&eg, &member_pairs(&eg)).violations();
    }
    s.push("shortcut-metric", "base-separation", rat_opt(base), format!(">= {}", rat(LAAKSO.b)), base.map_or(true, |r| r >= LAAKSO.b));
    let c = LAAKSO.separation();
    s.push("shortcut-metric", "eta-separation", rat_opt(eta), format!(">= {}", rat(c)), eta.map_or(true, |r| r >= c));
    s.push(
        "shortcut-metric",
        "member-separation",
        format!("{fault_violations} member pairs violating the basic separation bound"),
        "0",
        fault_violations == 0,
    );
    let ok = lo.map_or(true, |r| r >= LAAKSO.diameter()) && hi.map_or(true, |r| r <= Rational::from_integer(1));
    s.push("shortcut-metric", "chord-diameter", format!("[{}, {}]", rat_opt(lo), rat_opt(hi)), format!("[{}, 1/1]", rat(LAAKSO.diameter())), ok);

    let eg = EtaGraph::new(g.clone(), EtaSchedule::geometric(Rational::new(1, 2), depth)?)?;
    let mut rng = s.rng();
    let nv = g.vertex_count() as VertexId;
    let (mut tested, mut worst, mut bad) = (0usize, Rational::from_integer(0), 0usize);
    for _ in 0..20_000 {
        if tested == 200 {
            break;
        }
        let (x, y) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let de = eg.dist_eta_units(x, y);
        if de == 0 || de >= eg.dist_base_units(x, y) {
            continue;
        }
        tested += 1;
        match best_single_jump(&eg, x, y) {
            Some(j) => {
                bad += usize::from(j.cost > 3 * de);
                let r = Rational::new(j.cost as i64, de as i64);
                if r > worst {
                    worst = r;
                }
            }
            None => bad += 1,
        }
    }
    s.push("shortcut-metric", "single-jump", format!("max cost / d_eta {} over {tested} pairs", rat(worst)), format!("<= {}", rat(LAAKSO.single_jump())), bad == 0 && tested > 0);

    let small = Rational::new(1, 64);
    let r = Rational::new(1, 4);
    let eg = EtaGraph::new(g.clone(), EtaSchedule::constant(small, depth)?)?;
    let failing = (0..eg.sets().len()).filter(|&k| !must_be_jump(&eg, k, r).holds()).count();
    let below = LAAKSO.single_jump() * (r + 1) * small < LAAKSO.must_be_jump();
    s.push("shortcut-metric", "must-be-jump", format!("{failing} of {} sets at eta = 1/64, R = 1/4", eg.sets().len()), "0", below && failing == 0);

    let alpha: Vec<f64> = (1..=100_000).map(|i| 1.0 / i as f64).collect();
    let rep = schedule_blocks(&alpha, 2.0, 1.0)?;
    s.push(
        "shortcut-metric",
        "schedule-blocks",
        format!("block sum {}, power series {}", real(rep.total_sum), real(rep.power_series)),
        format!("diverging, power series <= {}", real(rep.power_bound)),
        rep.diverging && rep.power_series <= rep.power_bound,
    );

    let mut worst_gap = i64::MAX;
    for n in 1..=depth {
        let gn = laakso(n)?;
        let sdim = gn.params().dimension().s;
        let eg = EtaGraph::new(gn, EtaSchedule::geometric(Rational::new(1, 2), n)?)?;
        let div: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-1.0 / sdim)).collect();
        let conv: Vec<f64> = (1..=n).map(|i| 4f64.powf(-(i as f64) / 2.0)).collect();
        for metric in [Metric::Base, Metric::Eta] {
            let a = density_profile(&eg, &div, metric)?;
            let b = density_profile(&eg, &conv, metric)?;
            worst_gap = worst_gap.min(a.cumulative_weight[0] as i64 - b.cumulative_weight[0] as i64);
        }
    }
    s.push("shortcut-metric", "density-dominance", format!("least coverage gap {worst_gap} edge-halves"), "> 0", worst_gap > 0);
    Ok(())
}

fn map_checks(s: &mut Suite, depth: usize) -> Result<()> {
    let g = laakso(depth)?;
    let n = g.depth();
    let eg = EtaGraph::new(g.clone(), EtaSchedule::ones(n))?;
    let mut bad = 0usize;
    for i in 1..=n {
        let t: Vec<i64> = (0..g.vertex_count() as VertexId).map(|v| tent_units(&g, i, v)).collect();
        for set in eg.sets().iter().filter(|x| x.level <= i) {
            let vals: Vec<i64> = set.members.iter().map(|&v| t[v as usize]).collect();
            let spread = vals.iter().max().unwrap() - vals.iter().min().unwrap();
            let want = if set.level == i { g.params().scale_units(i) as i64 } else { 0 };
            bad += usize::from(spread != want);
        }
        let mut slopes: HashMap<(u64, Vec<u8>), i64> = HashMap::new();
        for (e, &[a, b]) in g.edges().iter().enumerate() {
            let (lo, hi) = if g.height(a) < g.height(b) { (a, b) } else { (b, a) };
            let k = if i < n { g.height(lo) / g.params().scale_units(i + 1) } else { g.height(lo) };
            let slope = t[hi as usize] - t[lo as usize];
            let prev = *slopes.entry((k, g.edge_digits(e)[..i].to_vec())).or_insert(slope);
            bad += usize::from(slope.abs() > 1 || prev != slope);
        }
        let u = g.params().scale_units(i);
        bad += (0..g.vertex_count()).filter(|&v| g.height(v as VertexId) % u == 0 && t[v] != 0).count();
        bad += usize::from((tent_block(&g, i)?.lip() - 1.0).abs() > 1e-12);
    }
    s.push("lipschitz-maps", "tent-block", format!("{bad} tent block violations over levels 1..={n}"), "0", bad == 0);

    let d = g.denom() as f64;
    let values: Vec<f64> = (0..g.vertex_count() as VertexId).flat_map(|v| [g.height(v) as f64 / d, 0.0]).collect();
    let f = PAMap::new(g.clone(), 2, values, Norm::Euclidean)?;
    let mut excess = f64::NEG_INFINITY;
    let mut identity: f64 = 0.0;
    for i in 1..=n {
        let amp = 1.0 / i as f64;
        let big = orthogonal_step(&f, i, amp)?;
        let t = tent_block(&g, i)?;
        excess = excess.max(big.lip().powi(2) - (f.lip().powi(2) + amp * amp));
        for &[a, b] in g.edges() {
            let df = f.diff_norm(a, b) * d;
            let dg = (t.scalar_at(a) - t.scalar_at(b)).abs() * d;
            let db = big.diff_norm(a, b) * d;
            identity = identity.max((db * db - (df * df + amp * amp * dg * dg)).abs());
        }
    }
    s.push(
        "lipschitz-maps",
        "orthogonal-step",
        format!("max LIP^2 - (L^2 + A^2) = {}, edge identity defect {}", real(excess), real(identity)),
        "<= 1e-9",
        excess <= 1e-9 && identity <= 1e-9,
    );

    let eta = EtaSchedule::geometric(Rational::new(1, 2), n)?;
    let levels: Vec<usize> = (1..=n).collect();
    let f = bad_map_r2(&g, &levels, &eta)?;
    let bound: f64 = levels.iter().map(|&i| to_f64(eta.eta(i)).powi(2)).sum();
    let lip2 = f.lip().powi(2);
    s.push("lipschitz-maps", "bad-map-r2", format!("LIP^2 = {}", real(lip2)), format!("<= {}", real(bound)), lip2 <= bound + 1e-12);
    Ok(())
}

/// Largest violation of the variational inequality of `F_level` against `competitor` over the level-`level` cubes.
pub fn variational_violation(g: &LaaksoGraph, u: &PAMap, competitor: &PAMap, level: usize, cfg: &EnergyConfig) -> Result<f64> {
    let eu = edge_energies(u, cfg.q);
    let ev = edge_energies(competitor, cfg.q);
    let ed = edge_energies(&u.sub(competitor)?, cfg.q);
    let c = cfg.variational_constant();
    let mut slack = vec![0.0; g.cube_count(level)];
    for e in 0..g.edge_count() {
        slack[g.edge_cube_index(e, level)] += ev[e] - eu[e] - c * ed[e];
    }
    Ok(slack.iter().fold(0.0f64, |w, &x| w.max(-x)))
}

fn energy_checks(s: &mut Suite, depth: usize) -> Result<()> {
    let g = laakso(depth)?;
    let fams = enumerate_shortcuts(&g)?;
    let cfg = EnergyConfig::quadratic();
    let mut rng = s.rng();
    let (mut excess, mut var, mut sym, mut gate) = (f64::NEG_INFINITY, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..3 {
        let f = mcshane_map(&g, 4, &mut rng)?;
        let c = cascade(&f, &cfg, true)?;
        excess = excess.max(c.max_excess());
        for i in 0..=g.depth() + 1 {
            var = var.max(variational_violation(&g, &c.maps[i], &f, i, &cfg)?);
            if (1..=g.depth()).contains(&i) {
                sym = sym.max(c.symmetry_defect(i)?);
            }
        }
        gate = gate.max(c.gate_defect(&fams)?);
    }
    s.push("harmonic-energy", "cascade-telescoping", format!("max cumulative - bound {}", real(excess)), "<= 1e-8", excess <= 1e-8);
    s.push("harmonic-energy", "variational-inequality", format!("max violation {}", real(var)), "<= 1e-9", var <= 1e-9);
    s.push("harmonic-energy", "symmetry", format!("max defect {}", real(sym)), "0", sym == 0.0);
    s.push("harmonic-energy", "gate-identity", format!("max defect {}", real(gate)), "<= 1e-12", gate <= 1e-12);

    let g = laakso(1)?;
    let t = tent_block(&g, 1)?;
    let rep = collapse_sum(&t, &enumerate_shortcuts(&g)?, &Cube { level: 0, interval: 0, prefix: vec![] }, 1.5)?;
    s.push("harmonic-energy", "collapse-tent", format!("ratio {}", real(rep.ratio)), "1/4", rep.sum == 0.25 && (rep.ratio - 0.25).abs() < 1e-15);
    Ok(())
}

fn diamond_checks(s: &mut Suite, depth: usize) -> Result<()> {
    let mut grids: Vec<Vec<u32>> = vec![vec![]];
    let mut seen = 0;
    let mut bad = 0;
    for _ in 0..depth {
        grids = grids.iter().flat_map(|g| [4u32, 6, 8].map(|k| [g.as_slice(), &[k]].concat())).collect();
        for grid in &grids {
            seen += 1;
            bad += usize::from(compute_p_g(grid)? != 1);
        }
    }
    s.push("diamond-graphs", "p-g", format!("{bad} of {seen} grids with p_G != 1"), "0", bad == 0);

    let grid = [4u32, 6, 4, 8][..depth + 1].to_vec();
    let d = build_diamond(2, &grid)?;
    let subsets = nonempty_subsets(depth);
    let bad = subsets.iter().map(|l| restrict(&d, l).map(|r| !r.is_homomorphism(&d))).collect::<std::result::Result<Vec<bool>, _>>()?;
    let bad = bad.iter().filter(|b| **b).count();
    s.push("diamond-graphs", "restriction", format!("{bad} of {} level sets disagree", subsets.len()), "0", bad == 0);

    let g = laakso(depth)?;
    let fams = enumerate_shortcuts(&g)?;
    let (mut pairs, mut bad) = (0usize, 0usize);
    for levels in nonempty_subsets(depth) {
        let proj = project_laakso(&g, &levels)?;
        bad += usize::from(!proj.is_one_lipschitz(&g));
        for p in proj.pair_images(&g, &fams) {
            pairs += 1;
            bad += usize::from(!p.matches());
        }
    }
    s.push("diamond-graphs", "projection", format!("{bad} failures over {pairs} pair images"), "0", bad == 0);
    Ok(())
}

fn light_checks(s: &mut Suite, depth: usize) -> Result<()> {
    let g = laakso(depth)?;
    let (mut sep, mut diam, mut broken) = (None::<Rational>, Rational::from_integer(0), 0usize);
    for sched in schedules(depth)? {
        let eg = EtaGraph::new(g.clone(), sched)?;
        for level in 2..=depth + 1 {
            for i in intervals(&g, level)? {
                let p = class_partition(&eg, &i)?;
                broken += usize::from(!p.holds());
                sep = min_rat(sep, p.separation_ratio());
                if p.diameter_ratio() > diam {
                    diam = p.diameter_ratio();
                }
            }
        }
    }
    s.push(
        "lipschitz-light",
        "class-bounds",
        format!("separation / |I| >= {}, diameter / |I| <= {}", rat_opt(sep), rat(diam)),
        "separation >= 1/3, diameter <= 5",
        broken == 0,
    );

    let mut constants = Vec::new();
    for n in 1..=depth {
        let gn = laakso(n)?;
        let eg = EtaGraph::new(gn.clone(), EtaSchedule::geometric(Rational::new(1, 2), n)?)?;
        let iv = sample_intervals(&gn, 2..=n + 1, 4)?;
        constants.push(light_constant(&eg, &iv, RGrid::default())?.constant);
    }
    let (lo, hi) = constants.iter().fold((f64::MAX, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    s.push(
        "lipschitz-light",
        "light-constant",
        format!("constants {} for n = 1..={depth}", constants.iter().map(|c| real(*c)).collect::<Vec<_>>().join(" ")),
        "finite, max <= 2 min",
        hi.is_finite() && hi <= 2.0 * lo,
    );

    let mut rng = s.rng();
    let mut violations = 0;
    let mut samples = 0;
    for sched in schedules(depth)? {
        let eg = EtaGraph::new(g.clone(), sched)?;
        let rep = basic_separation(&eg, 200, &mut rng);
        samples += rep.samples.len();
        violations += rep.violations();
    }
    s.push("lipschitz-light", "basic-separation", format!("{violations} violations over {samples} samples"), "0", violations == 0);
    Ok(())
}
