//! Energy minimisers on one cube with the boundary values of `f`.
//!
//! At `q = 2` the minimiser solves a Dirichlet problem for the graph
//! Laplacian of the cube, one coordinate at a time. For `q > 2` (scalar maps
//! only) an iteratively reweighted least-squares scheme runs until the
//! relative energy decrease drops below the configured tolerance.

use std::collections::HashMap;

use laakso_core::{Cube, LaaksoGraph, VertexId};
use lipschitz_maps::PAMap;
use sprs::{FillInReduction, SymmetryCheck, TriMat};
use sprs_ldl::Ldl;

use crate::config::{EnergyConfig, IRLS_EPSILON};
use crate::energy::{check_cube, cube_edges, edge_measure};
use crate::error::{EnergyError, Result};

/// Minimiser on one cube: values on every vertex of the closed cube.
#[derive(Clone, Debug)]
pub struct PieceSolution {
    pub cube: Cube,
    pub vertices: Vec<VertexId>,
    /// `free[k]` is false on boundary vertices, whose values are copied from `f`.
    pub free: Vec<bool>,
    /// Row-major, `dim` entries per vertex.
    pub values: Vec<f64>,
    pub dim: usize,
    pub energy: f64,
    pub iterations: usize,
}

impl PieceSolution {
    /// `f` with its values on the cube replaced by the minimiser.
    pub fn extend(&self, f: &PAMap) -> PAMap {
        let mut out = f.clone();
        for (k, &v) in self.vertices.iter().enumerate() {
            out.value_mut(v).copy_from_slice(&self.values[k * self.dim..(k + 1) * self.dim]);
        }
        out
    }
}

/// Minimises `E_q(., Q)` over maps agreeing with `f` on the boundary vertices of `Q`.
pub fn minimize_piece(f: &PAMap, cube: &Cube, cfg: &EnergyConfig) -> Result<PieceSolution> {
    cfg.validate()?;
    check_cube(f.graph(), cube)?;
    let edges = cube_edges(f.graph(), cube);
    solve_with_edges(f, cube, &edges, cfg)
}

struct Local {
    vertices: Vec<VertexId>,
    free: Vec<bool>,
    /// Position among free vertices, `usize::MAX` on boundary vertices.
    slot: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

fn local_structure(g: &LaaksoGraph, cube: &Cube, edges: &[usize]) -> Local {
    let vertices = g.vertices_in(cube);
    let index: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let free: Vec<bool> = vertices.iter().map(|&v| !g.is_boundary_height(cube, g.height(v))).collect();
    let mut slot = vec![usize::MAX; vertices.len()];
    let mut next = 0;
    for (k, &is_free) in free.iter().enumerate() {
        if is_free {
            slot[k] = next;
            next += 1;
        }
    }
    let pairs = edges
        .iter()
        .map(|&e| {
            let [a, b] = g.edges()[e];
            (index[&a], index[&b])
        })
        .collect();
    Local { vertices, free, slot, pairs }
}

/// Dirichlet solve of the weighted Laplacian for one coordinate block.
///
/// `values` holds `dim` entries per local vertex; free entries are overwritten.
fn dirichlet_solve(local: &Local, weights: &[f64], values: &mut [f64], dim: usize) -> Result<()> {
    let nf = local.slot.iter().filter(|&&s| s != usize::MAX).count();
    if nf == 0 {
        return Ok(());
    }
    let mut tri = TriMat::new((nf, nf));
    let mut rhs = vec![0.0; nf * dim];
    for (&(a, b), &w) in local.pairs.iter().zip(weights) {
        let (sa, sb) = (local.slot[a], local.slot[b]);
        for (s, other, os) in [(sa, b, sb), (sb, a, sa)] {
            if s == usize::MAX {
                continue;
            }
            tri.add_triplet(s, s, w);
            if os == usize::MAX {
                for k in 0..dim {
                    rhs[k * nf + s] += w * values[other * dim + k];
                }
            } else {
                tri.add_triplet(s, os, -w);
            }
        }
    }
    let mat = tri.to_csc::<usize>();
    if nf == 1 {
        let diag = mat.get(0, 0).copied().unwrap_or(0.0);
        if diag <= 0.0 {
            return Err(EnergyError::Linear("isolated free vertex".into()));
        }
        let s = local.slot.iter().position(|&s| s == 0).expect("one free slot");
        for k in 0..dim {
            values[s * dim + k] = rhs[k] / diag;
        }
        return Ok(());
    }
    let ldl = Ldl::new()
        .fill_in_reduction(FillInReduction::ReverseCuthillMcKee)
        .check_symmetry(SymmetryCheck::DontCheckSymmetry)
        .numeric(mat.view())
        .map_err(|e| EnergyError::Linear(e.to_string()))?;
    for k in 0..dim {
        let x = ldl.solve(&rhs[k * nf..(k + 1) * nf]);
        for (v, &s) in local.slot.iter().enumerate() {
            if s != usize::MAX {
                values[v * dim + k] = x[s];
            }
        }
    }
    Ok(())
}

fn local_energy(local: &Local, values: &[f64], dim: usize, norm: &lipschitz_maps::Norm, d: f64, w: f64, q: f64) -> f64 {
    let mut diff = vec![0.0; dim];
    local
        .pairs
        .iter()
        .map(|&(a, b)| {
            for k in 0..dim {
                diff[k] = values[a * dim + k] - values[b * dim + k];
            }
            w * (norm.eval(&diff) * d).powf(q)
        })
        .sum()
}

pub(crate) fn solve_with_edges(f: &PAMap, cube: &Cube, edges: &[usize], cfg: &EnergyConfig) -> Result<PieceSolution> {
    let g = f.graph();
    let dim = f.dim();
    let local = local_structure(g, cube, edges);
    let mut values: Vec<f64> = local.vertices.iter().flat_map(|&v| f.value(v).to_vec()).collect();
    let d = g.denom() as f64;
    let w = edge_measure(g);
    let has_boundary = local.free.iter().any(|&x| !x);
    let mut iterations = 0;
    if !has_boundary {
        let c = f.value(g.base_vertex()).to_vec();
        for chunk in values.chunks_mut(dim) {
            chunk.copy_from_slice(&c);
        }
    } else if local.free.iter().any(|&x| x) {
        if cfg.is_quadratic() {
            let ones = vec![1.0; local.pairs.len()];
            dirichlet_solve(&local, &ones, &mut values, dim)?;
            iterations = 1;
        } else {
            if dim != 1 {
                return Err(EnergyError::Unsupported(format!("q = {} needs a scalar map, got dimension {dim}", cfg.q)));
            }
            iterations = reweighted(&local, &mut values, d, w, cfg)?;
        }
    }
    let energy = local_energy(&local, &values, dim, f.norm(), d, w, cfg.q);
    let Local { vertices, free, .. } = local;
    Ok(PieceSolution { cube: cube.clone(), vertices, free, values, dim, energy, iterations })
}

/// Reweighted least squares with a backtracking step along the reweighted solution.
fn reweighted(local: &Local, values: &mut Vec<f64>, d: f64, w: f64, cfg: &EnergyConfig) -> Result<usize> {
    let q = cfg.q;
    let norm = lipschitz_maps::Norm::Euclidean;
    let mut e = local_energy(local, values, 1, &norm, d, w, q);
    let mut rel = f64::INFINITY;
    for it in 1..=cfg.max_iterations {
        let weights: Vec<f64> = local
            .pairs
            .iter()
            .map(|&(a, b)| {
                let s = (values[a] - values[b]) * d;
                (s * s + IRLS_EPSILON).powf((q - 2.0) / 2.0)
            })
            .collect();
        let mut target = values.clone();
        dirichlet_solve(local, &weights, &mut target, 1)?;
        let step = |t: f64| -> Vec<f64> { values.iter().zip(&target).map(|(u, v)| u + t * (v - u)).collect() };
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut t = 1.0;
        for _ in 0..40 {
            for cand in [t, t / (q - 1.0)] {
                let u = step(cand);
                let eu = local_energy(local, &u, 1, &norm, d, w, q);
                if best.as_ref().map_or(true, |(b, _)| eu < *b) {
                    best = Some((eu, u));
                }
            }
            if best.as_ref().is_some_and(|(b, _)| *b < e) {
                break;
            }
            t *= 0.5;
        }
        let (e_new, u) = best.expect("line search evaluates at least one step");
        if e_new >= e {
            return Ok(it);
        }
        rel = (e - e_new) / e;
        *values = u;
        e = e_new;
        if rel < cfg.tolerance || e == 0.0 {
            return Ok(it);
        }
    }
    Err(EnergyError::Convergence { iterations: cfg.max_iterations, residual: rel })
}
