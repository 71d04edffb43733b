//! Capacitary ratio `||f(x) - f(y)||^s / (L^{s-p} E_p(f, B(x, 2 lambda d(x, y))))`.
//!
//! The ball keeps the edges whose two endpoints lie within the radius in the
//! base metric. Radii are integers in units of `1/D`.

use laakso_core::{Rational, VertexId};
use lipschitz_maps::PAMap;

use crate::energy::edge_measure;
use crate::error::{EnergyError, Result};

pub const DEFAULT_LAMBDA: i64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityReport {
    pub distance_units: u64,
    pub radius_units: u64,
    pub ball_edges: usize,
    pub numerator: f64,
    pub ball_energy: f64,
    pub ratio: f64,
}

pub fn capacity_ratio(f: &PAMap, x: VertexId, y: VertexId, p: f64, s: f64, lambda: Rational) -> Result<CapacityReport> {
    if !(1.0 <= p && p < s) {
        return Err(EnergyError::Config(format!("capacity exponents need 1 <= p < s, got p = {p}, s = {s}")));
    }
    if lambda <= Rational::from_integer(0) {
        return Err(EnergyError::Config(format!("lambda = {lambda} must be positive")));
    }
    if x == y {
        return Err(EnergyError::UndefinedRatio("x and y coincide".into()));
    }
    let g = f.graph();
    let dist = g.bfs_from(x);
    let d = dist[y as usize] as u64;
    let radius = (Rational::from_integer(2 * d as i64) * lambda).floor().to_integer() as u64;
    let w = edge_measure(g);
    let mut ball_edges = 0;
    let mut ball_energy = 0.0;
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        if dist[a as usize] as u64 <= radius && dist[b as usize] as u64 <= radius {
            ball_edges += 1;
            ball_energy += w * f.edge_slope(e).powf(p);
        }
    }
    let numerator = f.diff_norm(x, y).powf(s);
    let ratio = if numerator == 0.0 { 0.0 } else { numerator / (f.lip().powf(s - p) * ball_energy) };
    Ok(CapacityReport { distance_units: d, radius_units: radius, ball_edges, numerator, ball_energy, ratio })
}
