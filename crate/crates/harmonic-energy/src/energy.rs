//! Discrete `q`-energy: on a graph whose maps are affine along edges,
//! `E_q(u, Q)` is the sum over edges inside `Q` of `w(e) (||Delta u|| / l)^q`.

use laakso_core::{Cube, LaaksoGraph};
use lipschitz_maps::PAMap;

use crate::config::EnergyConfig;
use crate::error::{EnergyError, Result};

/// Measure `w(e)` of one edge as a float.
pub fn edge_measure(g: &LaaksoGraph) -> f64 {
    let w = g.edge_weight();
    *w.numer() as f64 / *w.denom() as f64
}

pub fn check_cube(g: &LaaksoGraph, q: &Cube) -> Result<()> {
    let n = g.depth();
    if q.level > n + 1 {
        return Err(EnergyError::Mismatch(format!("cube level {} exceeds {}", q.level, n + 1)));
    }
    if q.prefix.len() != g.prefix_len(q.level) {
        return Err(EnergyError::Mismatch(format!("prefix length {} at level {}", q.prefix.len(), q.level)));
    }
    if q.interval >= g.params().prefix_product(q.level) {
        return Err(EnergyError::Mismatch(format!("interval {} out of range at level {}", q.interval, q.level)));
    }
    if q.prefix.iter().any(|&d| d == 0 || d as u32 > g.m()) {
        return Err(EnergyError::Mismatch(format!("prefix {:?} has digits outside 1..={}", q.prefix, g.m())));
    }
    Ok(())
}

/// Edges whose interiors lie in `q`.
pub fn cube_edges(g: &LaaksoGraph, q: &Cube) -> Vec<usize> {
    let idx = g.cube_index(q);
    (0..g.edge_count()).filter(|&e| g.edge_cube_index(e, q.level) == idx).collect()
}

/// Per-edge energies `w(e) slope(e)^q` over the whole graph.
pub fn edge_energies(u: &PAMap, q: f64) -> Vec<f64> {
    let w = edge_measure(u.graph());
    (0..u.graph().edge_count()).map(|e| w * u.edge_slope(e).powf(q)).collect()
}

pub fn energy_on_edges(u: &PAMap, edges: &[usize], q: f64) -> f64 {
    let w = edge_measure(u.graph());
    edges.iter().map(|&e| w * u.edge_slope(e).powf(q)).sum()
}

/// `E_q(u, Q)`.
pub fn energy(u: &PAMap, cube: &Cube, q: f64) -> Result<f64> {
    check_cube(u.graph(), cube)?;
    Ok(energy_on_edges(u, &cube_edges(u.graph(), cube), q))
}

/// `E_q(u, X)`.
pub fn total_energy(u: &PAMap, q: f64) -> f64 {
    edge_energies(u, q).iter().sum()
}

/// `E_q(v, Q) - E_q(u, Q) - 2 (2K)^-q E_q(u - v, Q)`; nonnegative when `u` minimises against `v`.
pub fn variational_slack(u: &PAMap, v: &PAMap, cube: &Cube, cfg: &EnergyConfig) -> Result<f64> {
    check_cube(u.graph(), cube)?;
    let edges = cube_edges(u.graph(), cube);
    let diff = u.sub(v)?;
    let q = cfg.q;
    Ok(energy_on_edges(v, &edges, q) - energy_on_edges(u, &edges, q) - cfg.variational_constant() * energy_on_edges(&diff, &edges, q))
}

/// `E(u) + E(v) - 2E((u+v)/2) - 2 K^-q E((u-v)/2)` on `Q`.
pub fn convexity_slack(u: &PAMap, v: &PAMap, cube: &Cube, cfg: &EnergyConfig) -> Result<f64> {
    check_cube(u.graph(), cube)?;
    let edges = cube_edges(u.graph(), cube);
    let q = cfg.q;
    let mean = u.add(v)?.scaled(0.5);
    let half = u.sub(v)?.scaled(0.5);
    Ok(energy_on_edges(u, &edges, q) + energy_on_edges(v, &edges, q)
        - 2.0 * energy_on_edges(&mean, &edges, q)
        - 2.0 * cfg.k_q.powf(-q) * energy_on_edges(&half, &edges, q))
}
