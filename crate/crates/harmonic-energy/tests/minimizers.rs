use std::collections::HashSet;
use std::sync::Arc;

use harmonic_energy::{
    capacity_ratio, collapse_sum, convexity_slack, energy, mcshane_map, minimize_piece, total_energy, variational_slack,
    EnergyConfig, EnergyError,
};
use laakso_core::{build_graph, Cube, LaaksoGraph, LaaksoParams, Rational, VertexId};
use lipschitz_maps::{tent_block, Norm, PAMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use shortcut_metric::enumerate_shortcuts;

fn graph(m: u32, grid: Vec<u32>) -> Arc<LaaksoGraph> {
    Arc::new(build_graph(&LaaksoParams::new(m, grid).unwrap()).unwrap())
}

fn whole() -> Cube {
    Cube { level: 0, interval: 0, prefix: vec![] }
}

#[test]
fn energy_examples() {
    let g = graph(2, vec![4, 4]);
    assert_eq!(energy(&PAMap::zeros(g.clone(), 1), &whole(), 2.0).unwrap(), 0.0);
    assert!((energy(&PAMap::height(g.clone()), &whole(), 2.0).unwrap() - 1.0).abs() < 1e-12);
    // tent at level 1: 2 gated intervals x 4 edges x 2 digit sheets, each edge of measure 1/32
    let t = tent_block(&g, 1).unwrap();
    let support = (0..g.edge_count()).filter(|&e| t.edge_slope(e) > 0.5).count();
    assert_eq!(support, 16);
    assert!((energy(&t, &whole(), 2.0).unwrap() - 0.5).abs() < 1e-12);
    let bad = Cube { level: 1, interval: 9, prefix: vec![1] };
    assert!(matches!(energy(&t, &bad, 2.0), Err(EnergyError::Mismatch(_))));
}

#[test]
fn config_validation() {
    assert!(EnergyConfig::new(1.5, 1.0, 1e-10, 10).is_err());
    assert!(EnergyConfig::new(2.0, 0.5, 1e-10, 10).is_err());
    assert!(EnergyConfig::new(2.0, 1.0, 0.0, 10).is_err());
    let cfg = EnergyConfig::new(3.0, 1.0, 1e-10, 100).unwrap();
    let g = graph(2, vec![4, 4]);
    let f = PAMap::new(g.clone(), 2, vec![0.0; 2 * g.vertex_count()], Norm::Euclidean).unwrap();
    let q = Cube { level: 1, interval: 1, prefix: vec![1] };
    assert!(matches!(minimize_piece(&f, &q, &cfg), Err(EnergyError::Unsupported(_))));
}

#[test]
fn height_is_harmonic_on_interior_cubes() {
    let g = graph(2, vec![4, 4, 4]);
    let h = PAMap::height(g.clone());
    let cfg = EnergyConfig::quadratic();
    for level in 1..=3 {
        for q in g.cubes(level).unwrap() {
            let (lo, hi) = g.cube_heights(&q);
            let sol = minimize_piece(&h, &q, &cfg).unwrap();
            let m = g.cube_measure(&q);
            let measure = *m.numer() as f64 / *m.denom() as f64;
            if lo > 0 && hi < g.denom() {
                for (k, &v) in sol.vertices.iter().enumerate() {
                    assert!((sol.values[k] - h.scalar_at(v)).abs() < 1e-12);
                }
                assert!((sol.energy - measure).abs() < 1e-12);
            } else {
                // one free end: the minimiser is the constant boundary value
                let edge = if lo == 0 { hi } else { lo } as f64 / g.denom() as f64;
                assert!(sol.values.iter().all(|x| (x - edge).abs() < 1e-12));
                assert!(sol.energy < 1e-20);
            }
        }
    }
    let sol = minimize_piece(&h, &whole(), &cfg).unwrap();
    assert!(sol.values.iter().all(|&x| x == 0.0));
}

/// Gauss-Seidel sweeps on the free vertices of a cube, to machine precision.
fn gauss_seidel(f: &PAMap, q: &Cube) -> Vec<(VertexId, f64)> {
    let g = f.graph();
    let verts = g.vertices_in(q);
    let inside: HashSet<VertexId> = verts.iter().copied().collect();
    let free: Vec<VertexId> = verts.iter().copied().filter(|&v| !g.is_boundary_height(q, g.height(v))).collect();
    let mut u: std::collections::HashMap<VertexId, f64> = verts.iter().map(|&v| (v, f.scalar_at(v))).collect();
    for _ in 0..200_000 {
        let mut change: f64 = 0.0;
        for &v in &free {
            let nb: Vec<f64> = g.neighbors(v).iter().filter(|w| inside.contains(w)).map(|w| u[w]).collect();
            let new = nb.iter().sum::<f64>() / nb.len() as f64;
            change = change.max((new - u[&v]).abs());
            u.insert(v, new);
        }
        if change < 1e-15 {
            break;
        }
    }
    verts.iter().map(|&v| (v, u[&v])).collect()
}

#[test]
fn quadratic_solve_matches_relaxation() {
    let g = graph(2, vec![4, 4, 4]);
    let mut rng = SplitMix64::seed_from_u64(3);
    let cfg = EnergyConfig::quadratic();
    let t2 = tent_block(&g, 2).unwrap();
    let rnd = mcshane_map(&g, 4, &mut rng).unwrap();
    for f in [t2, rnd] {
        for q in [Cube { level: 1, interval: 1, prefix: vec![2] }, Cube { level: 2, interval: 5, prefix: vec![1, 2] }] {
            let sol = minimize_piece(&f, &q, &cfg).unwrap();
            let oracle = gauss_seidel(&f, &q);
            for (k, &(v, x)) in oracle.iter().enumerate() {
                assert_eq!(sol.vertices[k], v);
                assert!((sol.values[k] - x).abs() < 1e-9, "{} vs {}", sol.values[k], x);
            }
            assert!(sol.energy <= energy(&f, &q, 2.0).unwrap() + 1e-15);
        }
    }
}

#[test]
fn quadratic_minimiser_of_level_two_tent_on_gated_level_one_cube() {
    let g = graph(2, vec![4, 4, 4]);
    let t2 = tent_block(&g, 2).unwrap();
    let q = Cube { level: 1, interval: 2, prefix: vec![1] };
    let sol = minimize_piece(&t2, &q, &EnergyConfig::quadratic()).unwrap();
    // the boundary data vanishes, so the minimiser is zero, as is the symmetric average at the jump height
    assert!(sol.values.iter().all(|&x| x.abs() < 1e-15));
    assert!(energy(&t2, &q, 2.0).unwrap() > 0.0);
}

/// `u + phi` with `phi` random on the free vertices of `q`.
fn perturb(u: &PAMap, q: &Cube, amp: f64, rng: &mut SplitMix64) -> PAMap {
    let g = u.graph();
    let mut v = u.clone();
    for x in g.vertices_in(q) {
        if !g.is_boundary_height(q, g.height(x)) {
            for c in v.value_mut(x) {
                *c += amp * rng.gen_range(-1.0..1.0);
            }
        }
    }
    v
}

#[test]
fn variational_inequality_against_random_competitors() {
    let g = graph(2, vec![4, 4, 4]);
    let mut rng = SplitMix64::seed_from_u64(21);
    for cfg in [EnergyConfig::quadratic(), EnergyConfig::new(3.0, 1.0, 1e-12, 10_000).unwrap()] {
        let f = mcshane_map(&g, 3, &mut rng).unwrap();
        for q in [Cube { level: 1, interval: 1, prefix: vec![1] }, Cube { level: 2, interval: 6, prefix: vec![2, 1] }] {
            let sol = minimize_piece(&f, &q, &cfg).unwrap();
            let u = sol.extend(&f);
            assert!(variational_slack(&u, &f, &q, &cfg).unwrap() >= -1e-9);
            for k in 0..20 {
                let v = perturb(&u, &q, 0.002 * (1 + k) as f64, &mut rng);
                let slack = variational_slack(&u, &v, &q, &cfg).unwrap();
                assert!(slack >= -1e-9, "q = {} slack {slack}", cfg.q);
            }
        }
    }
}

/// Coordinate descent for `q > 2`: each free value minimises its own convex 1-D energy by bisection.
fn coordinate_descent(f: &PAMap, q: &Cube, p: f64) -> f64 {
    let g = f.graph();
    let verts = g.vertices_in(q);
    let inside: HashSet<VertexId> = verts.iter().copied().collect();
    let free: Vec<VertexId> = verts.iter().copied().filter(|&v| !g.is_boundary_height(q, g.height(v))).collect();
    let mut u = f.clone();
    for _ in 0..4000 {
        for &v in &free {
            let nb: Vec<f64> = g.neighbors(v).iter().filter(|w| inside.contains(w)).map(|&w| u.scalar_at(w)).collect();
            let grad = |x: f64| nb.iter().map(|&y| (x - y).signum() * (x - y).abs().powf(p - 1.0)).sum::<f64>();
            let (mut lo, mut hi) = nb.iter().fold((f64::MAX, f64::MIN), |(a, b), &y| (a.min(y), b.max(y)));
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if grad(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            u.value_mut(v)[0] = 0.5 * (lo + hi);
        }
    }
    energy(&u, q, p).unwrap()
}

#[test]
fn reweighted_scheme_matches_coordinate_descent() {
    let g = graph(2, vec![4, 4, 4]);
    let mut rng = SplitMix64::seed_from_u64(8);
    let f = mcshane_map(&g, 5, &mut rng).unwrap();
    let q = Cube { level: 2, interval: 2, prefix: vec![1, 1] };
    for p in [3.0, 4.0] {
        let cfg = EnergyConfig::new(p, 1.0, 1e-12, 10_000).unwrap();
        let sol = minimize_piece(&f, &q, &cfg).unwrap();
        let oracle = coordinate_descent(&f, &q, p);
        assert!((sol.energy - oracle).abs() <= 1e-6 * oracle.max(1e-300), "{} vs {oracle}", sol.energy);
        assert!(sol.energy <= energy(&f, &q, p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn strong_convexity_of_energy(seed in any::<u64>(), level in 0usize..=2) {
        let g = graph(2, vec![4, 4, 4]);
        let mut rng = SplitMix64::seed_from_u64(seed);
        let nv = g.vertex_count();
        let rand_map = |rng: &mut SplitMix64, dim: usize| {
            let vals = (0..dim * nv).map(|_| rng.gen_range(-0.1..0.1)).collect();
            PAMap::new(g.clone(), dim, vals, Norm::Euclidean).unwrap()
        };
        let cubes = g.cubes(level).unwrap();
        let q = &cubes[rng.gen_range(0..cubes.len())];
        let (u, v) = (rand_map(&mut rng, 2), rand_map(&mut rng, 2));
        let scale = total_energy(&u, 2.0) + total_energy(&v, 2.0);
        prop_assert!(convexity_slack(&u, &v, q, &EnergyConfig::quadratic()).unwrap().abs() <= 1e-12 * scale);
        let (u, v) = (rand_map(&mut rng, 1), rand_map(&mut rng, 1));
        let cfg = EnergyConfig::new(3.0, 1.0, 1e-10, 10).unwrap();
        prop_assert!(convexity_slack(&u, &v, q, &cfg).unwrap() >= -1e-9);
    }
}

#[test]
fn collapse_examples() {
    let g = graph(2, vec![4, 4]);
    let fams = enumerate_shortcuts(&g).unwrap();
    let h = PAMap::height(g.clone());
    assert_eq!(collapse_sum(&h, &fams, &whole(), 1.5).unwrap().sum, 0.0);
    let t = tent_block(&g, 1).unwrap();
    let rep = collapse_sum(&t, &fams, &whole(), 1.5).unwrap();
    assert_eq!(rep.sets, 2);
    assert_eq!(rep.sum, 0.25);
    assert!((rep.ratio - 0.25).abs() < 1e-15);
    let q = Cube { level: 1, interval: 0, prefix: vec![1] };
    assert_eq!(collapse_sum(&t, &fams, &q, 1.5).unwrap().sets, 0);
}

#[test]
fn capacity_for_height_matches_closed_form_ball() {
    let g = graph(2, vec![4, 4, 4]);
    let h = PAMap::height(g.clone());
    let s = g.params().dimension().s;
    let lambda = Rational::from_integer(2);
    let w = 1.0 / (g.denom() * 4) as f64;
    for (x, y) in [(0u32, 40u32), (100, 180), (50, 51)] {
        if g.digits_of(x) != g.digits_of(y) || x == y {
            continue;
        }
        let rep = capacity_ratio(&h, x, y, 1.0, s, lambda).unwrap();
        let d = g.dist_formula_units(x, y);
        let r = 4 * d;
        let inside = |v: VertexId| g.dist_formula_units(x, v) <= r;
        let ball = g.edges().iter().filter(|&&[a, b]| inside(a) && inside(b)).count();
        let dh = (g.height(x) as f64 - g.height(y) as f64).abs() / g.denom() as f64;
        assert_eq!(rep.ball_edges, ball);
        assert!((rep.ratio - dh.powf(s) / (ball as f64 * w)).abs() < 1e-12 * rep.ratio);
    }
    let c = PAMap::zeros(g.clone(), 1);
    assert_eq!(capacity_ratio(&c, 0, 9, 1.0, s, lambda).unwrap().ratio, 0.0);
    assert!(matches!(capacity_ratio(&h, 3, 3, 1.0, s, lambda), Err(EnergyError::UndefinedRatio(_))));
    assert!(capacity_ratio(&h, 3, 4, 2.0, s, lambda).is_err());
}

#[test]
fn capacity_sweep_is_stable_under_doubling_lambda() {
    let g = graph(2, vec![4, 4, 4, 4]);
    let s = g.params().dimension().s;
    let mut rng = SplitMix64::seed_from_u64(17);
    let f = mcshane_map(&g, 4, &mut rng).unwrap();
    let nv = g.vertex_count() as u32;
    let mut pairs = Vec::new();
    while pairs.len() < 500 {
        let (x, y) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        if x != y {
            pairs.push((x, y));
        }
    }
    let sweep = |lambda: i64| {
        pairs.iter().map(|&(x, y)| capacity_ratio(&f, x, y, 1.0, s, Rational::from_integer(lambda)).unwrap().ratio).fold(0.0, f64::max)
    };
    let (a, b) = (sweep(2), sweep(4));
    assert!(a.is_finite() && a > 0.0);
    assert!(b <= a && b >= a / 4.0, "{a} {b}");
}
