//! The nine experiments behind `lab run`.
//!
//! Each experiment builds its tables from a validated config and records the
//! invariants it found violated. Nothing here touches the filesystem.

use std::sync::Arc;

use diamond_graphs::{build_diamond, compute_p_g, project_laakso, restrict};
use harmonic_energy::{cascade, collapse_sum, mcshane_map, EnergyConfig};
use laakso_core::{build_graph, Cube, LaaksoGraph, Rational, VertexId};
use lipschitz_light::{class_partition, light_constant, sample_intervals, RGrid};
use lipschitz_maps::{bad_density, bad_map_r2, oscillation_report};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use shortcut_metric::checks::{contracted_diameters, member_distances, net_ratios, separation};
use shortcut_metric::constants::LAAKSO;
use shortcut_metric::{density_profile, enumerate_shortcuts, schedule_blocks, EtaGraph, Metric};

use crate::config::{AlphaGenerator, AlphaInput, Experiment, ExperimentConfig};
use crate::error::{LabError, Result};
use crate::table::{rat, rat_opt, real, Table};

/// Graphs with at most this many vertices are checked on all pairs by `verify-metric`.
pub const EXHAUSTIVE_VERTICES: usize = 1024;

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, Vec<u8>)>,
    /// Human-readable results, one line each.
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

impl Outcome {
    fn table(&mut self, t: &Table) {
        self.files.push((t.name().to_string(), t.to_bytes()));
    }

    fn raw(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        write(&mut buf).map_err(|e| LabError::io(name, e))?;
        self.files.push((name.to_string(), buf));
        Ok(())
    }

    fn check(&mut self, ok: bool, what: String) {
        self.summary.push(format!("{} {what}", if ok { "ok" } else { "VIOLATED" }));
        if !ok {
            self.failures.push(what);
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.experiment {
        Experiment::VerifyMetric => verify_metric(cfg),
        Experiment::VerifyShortcuts => verify_shortcuts(cfg),
        Experiment::Schedule => schedule(cfg),
        Experiment::BadMaps => bad_maps(cfg),
        Experiment::Cascade => run_cascade(cfg),
        Experiment::Collapse => collapse(cfg),
        Experiment::Diamond => diamond(cfg),
        Experiment::Liplight => liplight(cfg),
        Experiment::Density => density(cfg),
    }
}

fn graph(cfg: &ExperimentConfig) -> Result<Arc<LaaksoGraph>> {
    Ok(Arc::new(build_graph(&cfg.params()?.laakso()?)?))
}

fn eta_graph(cfg: &ExperimentConfig, g: &Arc<LaaksoGraph>) -> Result<EtaGraph> {
    Ok(EtaGraph::new(g.clone(), cfg.schedule(g.depth())?)?)
}

fn need_depth(cfg: &ExperimentConfig, g: &LaaksoGraph, min: usize) -> Result<()> {
    if g.depth() < min {
        return Err(LabError::Schema(format!("experiment {} needs n >= {min}", cfg.experiment.name())));
    }
    Ok(())
}

fn levels_or_all(cfg: &ExperimentConfig, max: usize) -> Result<Vec<usize>> {
    let levels = cfg.options.levels.clone().unwrap_or_else(|| (1..=max).collect());
    if let Some(l) = levels.iter().find(|&&l| l > max) {
        return Err(LabError::Schema(format!("options.I contains {l}, above {max}")));
    }
    Ok(levels)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn digits(word: &[u8]) -> String {
    word.iter().map(|d| d.to_string()).collect()
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn whole_space() -> Cube {
    Cube { level: 0, interval: 0, prefix: vec![] }
}

fn verify_metric(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    let nv = g.vertex_count() as VertexId;
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    if g.vertex_count() <= EXHAUSTIVE_VERTICES {
        for a in 0..nv {
            pairs.extend((a..nv).map(|b| (a, b)));
        }
    } else {
        let mut rng = SplitMix64::seed_from_u64(cfg.seed()?);
        let k = cfg.options.samples.unwrap_or(1000);
        pairs.extend((0..k).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nv))));
        pairs.sort_unstable();
    }
    let mut t = Table::new("verify_metric.csv", &["x", "y", "x_height", "y_height", "dist", "dist_formula", "equal"]);
    let mut mismatches = 0;
    let mut cached: Option<(VertexId, Vec<u32>)> = None;
    for &(a, b) in &pairs {
        if cached.as_ref().map_or(true, |(src, _)| *src != a) {
            cached = Some((a, g.bfs_from(a)));
        }
        let d = cached.as_ref().unwrap().1[b as usize] as u64;
        let f = g.dist_formula_units(a, b);
        mismatches += usize::from(d != f);
        t.push(vec![
            a.to_string(),
            b.to_string(),
            rat(g.height_rational(a)),
            rat(g.height_rational(b)),
            rat(g.units_to_rational(d)),
            rat(g.units_to_rational(f)),
            (d == f).to_string(),
        ]);
    }
    let mut out = Outcome::default();
    out.table(&t);
    out.check(mismatches == 0, format!("dist = dist_formula on {} pairs ({mismatches} mismatches)", pairs.len()));
    Ok(out)
}

fn verify_shortcuts(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    let eg = eta_graph(cfg, &g)?;
    let mut out = Outcome::default();
    let mut sets = Table::new("shortcut_sets.csv", &["set", "level", "height", "prefix", "members", "chord_weight"]);
    for (id, s) in eg.sets().iter().enumerate() {
        sets.row(&[&id, &s.level, &rat(g.units_to_rational(s.height)), &digits(&s.prefix), &s.members.len(), &rat(eg.chord_weight(id))]);
    }
    let mut checks = Table::new("shortcut_checks.csv", &["check", "pairs", "measured", "bound", "holds"]);
    let md = member_distances(&eg);
    checks.row(&[&"member_distance_mismatches", &md.pairs, &md.mismatches, &0, &(md.mismatches == 0)]);
    out.check(md.mismatches == 0, format!("member distance = delta_i on {} pairs", md.pairs));
    let sep = separation(&eg);
    let base_ok = sep.base_min_ratio.map_or(true, |r| r >= LAAKSO.b);
    let eta_ok = sep.eta_min_ratio.map_or(true, |r| r >= LAAKSO.separation());
    checks.row(&[&"base_separation", &sep.pairs, &rat_opt(sep.base_min_ratio), &rat(LAAKSO.b), &base_ok]);
    checks.row(&[&"eta_separation", &sep.pairs, &rat_opt(sep.eta_min_ratio), &rat(LAAKSO.separation()), &eta_ok]);
    out.check(base_ok, format!("base separation {} >= {}", rat_opt(sep.base_min_ratio), rat(LAAKSO.b)));
    out.check(eta_ok, format!("d_eta separation {} >= {}", rat_opt(sep.eta_min_ratio), rat(LAAKSO.separation())));
    let diam = contracted_diameters(&eg);
    let lo_ok = diam.min_ratio.map_or(true, |r| r >= LAAKSO.diameter());
    let hi_ok = diam.max_ratio.map_or(true, |r| r <= Rational::from_integer(1));
    checks.row(&[&"chord_diameter_min", &diam.pairs, &rat_opt(diam.min_ratio), &rat(LAAKSO.diameter()), &lo_ok]);
    checks.row(&[&"chord_diameter_max", &diam.pairs, &rat_opt(diam.max_ratio), &"1/1", &hi_ok]);
    out.check(lo_ok && hi_ok, format!("chord diameters in [{}, {}]", rat_opt(diam.min_ratio), rat_opt(diam.max_ratio)));
    for (i, r) in net_ratios(&eg).into_iter().enumerate() {
        let ok = r <= LAAKSO.net();
        checks.row(&[&format!("net_ratio_level_{}", i + 1), &g.vertex_count(), &rat(r), &rat(LAAKSO.net()), &ok]);
        out.check(ok, format!("level {} net ratio {} <= {}", i + 1, rat(r), rat(LAAKSO.net())));
    }
    out.table(&checks);
    out.table(&sets);
    Ok(out)
}

fn schedule(cfg: &ExperimentConfig) -> Result<Outcome> {
    let o = &cfg.options;
    let len = o.length.unwrap_or(100_000);
    let input = o.alpha.clone().unwrap_or(AlphaInput::Generated(AlphaGenerator::Power { exponent: 1.0, scale: 1.0 }));
    let alpha = input.values(len)?;
    let rep = schedule_blocks(&alpha, o.p.unwrap_or(2.0), o.sigma.unwrap_or(1.0)).map_err(|e| LabError::Schema(e.to_string()))?;
    let mut blocks = Table::new("schedule_blocks.csv", &["block", "size", "first", "last", "block_sum", "power_sum"]);
    for (k, b) in rep.blocks.iter().enumerate() {
        let first = b.first().copied().unwrap_or(0);
        let last = b.last().copied().unwrap_or(0);
        blocks.row(&[&(k + 1), &b.len(), &first, &last, &real(rep.block_sums[k]), &real(rep.block_power_sums[k])]);
    }
    let mut checkpoints = Table::new("schedule_checkpoints.csv", &["prefix", "block_sum", "power_series", "groups"]);
    for c in &rep.checkpoints {
        checkpoints.row(&[&c.prefix, &real(c.block_sum), &real(c.power_series), &c.groups]);
    }
    let mut out = Outcome::default();
    out.table(&blocks);
    out.table(&checkpoints);
    out.summary.push(format!("diverging = {}, selected mass {} over {} blocks", rep.diverging, real(rep.total_sum), rep.blocks.len()));
    let tol = cfg.check_tolerance(1e-12);
    out.check(
        rep.power_series <= rep.power_bound + tol,
        format!("power series {} <= {}", real(rep.power_series), real(rep.power_bound)),
    );
    Ok(out)
}

fn bad_maps(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    need_depth(cfg, &g, 1)?;
    let n = g.depth();
    let levels = levels_or_all(cfg, n)?;
    let eg = eta_graph(cfg, &g)?;
    let f = bad_map_r2(&g, &levels, eg.schedule())?;
    let eps = cfg.options.eps.clone().unwrap_or_else(|| vec![1.0]);
    let mut osc = Table::new("bad_map_oscillation.csv", &["eps", "level", "set", "diam_f", "diam_eta", "ratio", "bad"]);
    let mut dens = Table::new("bad_map_density.csv", &["eps", "bad_sets", "covered_weight", "total_weight", "fraction"]);
    for &e in &eps {
        let rep = oscillation_report(&f, &eg, e)?;
        for entry in &rep.entries {
            let bad = rep.bad_sets[entry.level - 1].contains(&entry.set);
            osc.row(&[&real(e), &entry.level, &entry.set, &real(entry.diam_f), &rat(entry.diam_eta), &real(entry.ratio), &bad]);
        }
        let d = bad_density(&rep, &eg, 1..=n);
        let count: usize = rep.bad_sets.iter().map(|b| b.len()).sum();
        dens.row(&[&real(e), &count, &d.covered_weight, &d.total_weight, &rat(Rational::new(d.covered_weight as i64, d.total_weight as i64))]);
    }
    let lip = f.lip();
    let bound: f64 = levels.iter().map(|&i| to_f64(eg.schedule().eta(i)).powi(2)).sum();
    let ok = lip * lip <= bound + cfg.check_tolerance(1e-12);
    let mut summary = Table::new("bad_map_lip.csv", &["levels", "lip", "lip_squared", "bound", "lip_eta", "holds"]);
    summary.row(&[&join(&levels), &real(lip), &real(lip * lip), &real(bound), &real(f.lip_eta(&eg)), &ok]);
    let mut out = Outcome::default();
    out.table(&summary);
    out.table(&osc);
    out.table(&dens);
    out.check(ok, format!("LIP^2 = {} <= sum eta_i^2 = {}", real(lip * lip), real(bound)));
    Ok(out)
}

fn energy_config(cfg: &ExperimentConfig) -> Result<EnergyConfig> {
    let o = &cfg.options;
    let d = EnergyConfig::default();
    Ok(EnergyConfig::new(
        o.q.unwrap_or(d.q),
        o.k_q.unwrap_or(d.k_q),
        o.tolerance.solver.unwrap_or(d.tolerance),
        o.max_iterations.unwrap_or(d.max_iterations),
    )?)
}

fn run_cascade(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    let ecfg = energy_config(cfg)?;
    let mut rng = SplitMix64::seed_from_u64(cfg.seed()?);
    let f = mcshane_map(&g, cfg.options.anchors.unwrap_or(4), &mut rng)?;
    let symmetrize = cfg.options.symmetrize.unwrap_or(true);
    let c = cascade(&f, &ecfg, symmetrize)?;
    let fams = enumerate_shortcuts(&g)?;
    let mut out = Outcome::default();
    out.raw("cascade.csv", |b| c.write_csv(b))?;
    let mut levels = Table::new("cascade_levels.csv", &["level", "diff_energy", "lip", "symmetry_defect"]);
    let mut worst_sym: f64 = 0.0;
    for (i, e) in c.level_diff_energies().iter().enumerate() {
        let sym = if (1..=g.depth()).contains(&i) { c.symmetry_defect(i)? } else { 0.0 };
        worst_sym = worst_sym.max(sym);
        let lip = c.lips.get(i).copied().unwrap_or(c.lip);
        levels.row(&[&i, &real(*e), &real(lip), &real(sym)]);
    }
    out.table(&levels);
    let tol = cfg.check_tolerance(1e-8);
    let excess = c.max_excess();
    out.check(excess <= tol, format!("cumulative - bound <= {} (max {})", real(tol), real(excess)));
    if symmetrize {
        out.check(worst_sym == 0.0, format!("symmetry defect {}", real(worst_sym)));
    }
    let gate = c.gate_defect(&fams)?;
    out.check(gate <= tol, format!("gate identity defect {}", real(gate)));
    Ok(out)
}

fn collapse(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    let fams = enumerate_shortcuts(&g)?;
    let s = cfg.options.s.unwrap_or(g.params().dimension().s);
    let mut rng = SplitMix64::seed_from_u64(cfg.seed()?);
    let anchors = cfg.options.anchors.unwrap_or(4);
    let mut t = Table::new("collapse.csv", &["map", "sets", "sum", "lip", "measure", "ratio"]);
    let mut worst: f64 = 0.0;
    for k in 0..cfg.options.samples.unwrap_or(100) {
        let f = mcshane_map(&g, anchors, &mut rng)?;
        let rep = collapse_sum(&f, &fams, &whole_space(), s)?;
        worst = worst.max(rep.ratio);
        t.row(&[&k, &rep.sets, &real(rep.sum), &real(rep.lip), &real(rep.measure), &real(rep.ratio)]);
    }
    let mut out = Outcome::default();
    out.table(&t);
    out.summary.push(format!("max collapse ratio {} at s = {}", real(worst), real(s)));
    out.check(worst.is_finite(), "collapse ratios are finite".into());
    Ok(out)
}

fn diamond(cfg: &ExperimentConfig) -> Result<Outcome> {
    let params = cfg.params()?;
    let grid = params.grid()?;
    let g = graph(cfg)?;
    need_depth(cfg, &g, 1)?;
    let d = build_diamond(params.m, &grid)?;
    let p = compute_p_g(&grid)?;
    let levels = levels_or_all(cfg, g.depth())?;
    let r = restrict(&d, &levels)?;
    let hom = r.is_homomorphism(&d);
    let proj = project_laakso(&g, &levels)?;
    let lip = proj.is_one_lipschitz(&g);
    let fams = enumerate_shortcuts(&g)?;
    let pairs = proj.pair_images(&g, &fams);
    let bad = pairs.iter().filter(|pi| !pi.matches()).count();
    let mut out = Outcome::default();
    let mut summary = Table::new(
        "diamond_summary.csv",
        &["grid", "levels", "p_g", "vertices", "edges", "restricted_grid", "restricted_vertices", "homomorphism", "one_lipschitz", "pairs", "pair_mismatches"],
    );
    summary.row(&[&join(&grid), &join(&levels), &p, &d.vertex_count(), &d.edge_count(), &join(r.graph.grid()), &r.graph.vertex_count(), &hom, &lip, &pairs.len(), &bad]);
    out.table(&summary);
    out.raw("diamond_edges.csv", |b| d.write_edge_csv(b))?;
    let mut pt = Table::new("diamond_projection.csv", &["level", "height", "u", "v", "in_levels", "laakso_dist", "image_dist", "matches"]);
    for pi in &pairs {
        pt.row(&[&pi.level, &rat(g.units_to_rational(pi.height)), &pi.u, &pi.v, &pi.in_levels, &rat(g.units_to_rational(pi.laakso_units)), &rat(g.units_to_rational(pi.image_units)), &pi.matches()]);
    }
    out.table(&pt);
    out.summary.push(format!("p_G = {p}"));
    out.check(hom, "restriction projection is a graph homomorphism".into());
    out.check(lip, "Laakso projection is 1-Lipschitz".into());
    out.check(bad == 0, format!("jump-distance dichotomy on {} pairs ({bad} mismatches)", pairs.len()));
    Ok(out)
}

fn liplight(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    need_depth(cfg, &g, 1)?;
    let eg = eta_graph(cfg, &g)?;
    let iv = sample_intervals(&g, 2..=g.depth() + 1, cfg.options.per_level.unwrap_or(4))?;
    let grid = RGrid { steps_per_doubling: cfg.options.steps_per_doubling.unwrap_or(RGrid::default().steps_per_doubling) };
    let light = light_constant(&eg, &iv, grid)?;
    let mut out = Outcome::default();
    out.raw("liplight.csv", |b| light.write_csv(b))?;
    let mut classes = Table::new(
        "liplight_classes.csv",
        &["level", "index", "interval_units", "l_w", "l_j", "classes", "separation_ratio", "diameter_ratio", "holds"],
    );
    let mut broken = 0;
    for i in &iv {
        let p = class_partition(&eg, i)?;
        broken += usize::from(!p.holds());
        classes.row(&[&i.level, &i.index, &p.interval_units, &join(&p.l_w), &join(&p.l_j), &p.classes.len(), &rat_opt(p.separation_ratio()), &rat(p.diameter_ratio()), &p.holds()]);
    }
    out.table(&classes);
    out.summary.push(format!("light constant {} over {} intervals", real(light.constant), iv.len()));
    out.check(broken == 0, format!("class separation >= |I|/3 and diameter <= 5|I| on {} intervals", iv.len()));
    Ok(out)
}

fn density(cfg: &ExperimentConfig) -> Result<Outcome> {
    let g = graph(cfg)?;
    need_depth(cfg, &g, 1)?;
    let n = g.depth();
    let eg = eta_graph(cfg, &g)?;
    let s = cfg.options.s.unwrap_or(g.params().dimension().s);
    let input = cfg.options.alpha.clone().unwrap_or(AlphaInput::Generated(AlphaGenerator::Power { exponent: 1.0 / s, scale: 1.0 }));
    let alpha = input.values(n)?;
    let mut t = Table::new(
        "density.csv",
        &["metric", "level", "alpha", "level_weight", "cumulative_weight", "total_weight", "level_fraction", "cumulative_fraction"],
    );
    for (name, metric) in [("base", Metric::Base), ("eta", Metric::Eta)] {
        let p = density_profile(&eg, &alpha, metric)?;
        let tw = p.total_weight as i64;
        for i in 1..=n {
            let (lw, cw) = (p.level_weight[i - 1], p.cumulative_weight[i - 1]);
            t.row(&[&name, &i, &real(alpha[i - 1]), &lw, &cw, &tw, &rat(Rational::new(lw as i64, tw)), &rat(Rational::new(cw as i64, tw))]);
        }
    }
    let mut out = Outcome::default();
    out.table(&t);
    out.summary.push(format!("alpha power sum {}", real(alpha.iter().map(|a| a.powf(s)).sum())));
    Ok(out)
}
