//! The harmonic cascade `F_0, .., F_{n+1}`.
//!
//! `F_i` glues the minimisers on the level-`i` cubes. The free vertices of
//! distinct cubes are disjoint, so the gluing is a plain overwrite of `f`.
//! With symmetrisation, each family of level-`i` cubes over a gated interval
//! that differ only in digit `i` is solved once, on the member with digit
//! `1`, and the solution is transported to the others by relabelling that
//! digit. The cubes of such a family share their boundary vertices, so the
//! transported map is a minimiser on every member.
//!
//! The differences are `F_{i+1} - F_i` for `i <= n` and a terminal term
//! `f - F_{n+1}`, so every cumulative sum telescopes up to `E_q(f, Q_0)`.

use std::io::{self, Write};
use std::sync::Arc;

use laakso_core::{heights, LVertex, LaaksoGraph};
use lipschitz_maps::PAMap;
use rayon::prelude::*;
use shortcut_metric::ShortcutFamily;

use crate::config::EnergyConfig;
use crate::energy::edge_energies;
use crate::error::Result;
use crate::solve::solve_with_edges;

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeRow {
    pub level: usize,
    pub cube: usize,
    /// `E_q(F_{level+1} - F_level, Q)`.
    pub diff_energy: f64,
    /// Sum of the difference energies on `Q` from `level` on.
    pub cumulative: f64,
    pub bound: f64,
    /// `LIP(F_level)`.
    pub lip: f64,
}

#[derive(Clone, Debug)]
pub struct EnergyCascade {
    pub config: EnergyConfig,
    pub symmetrized: bool,
    pub target: PAMap,
    /// `F_0, .., F_{n+1}`.
    pub maps: Vec<PAMap>,
    /// `LIP(f)`.
    pub lip: f64,
    pub lips: Vec<f64>,
    pub rows: Vec<CascadeRow>,
    diff_edge_energy: Vec<Vec<f64>>,
    map_edge_energy: Vec<Vec<f64>>,
}

fn gated(g: &LaaksoGraph, level: usize, interval: u64) -> bool {
    level >= 1 && level <= g.depth() && heights::interval_is_gated(g.params().grid(), level, interval)
}

fn level_map(f: &PAMap, level: usize, cfg: &EnergyConfig, symmetrize: bool) -> Result<PAMap> {
    let g = f.graph();
    let cubes = g.cubes(level)?;
    let groups = g.edges_by_cube(level);
    let mirrored = |k: usize| symmetrize && gated(g, level, cubes[k].interval) && cubes[k].prefix[level - 1] != 1;
    let solve: Vec<usize> = (0..cubes.len()).filter(|&k| !mirrored(k)).collect();
    let sols = solve
        .par_iter()
        .map(|&k| solve_with_edges(f, &cubes[k], &groups[k], cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut out = f.clone();
    for s in &sols {
        for (k, &v) in s.vertices.iter().enumerate() {
            if s.free[k] {
                out.value_mut(v).copy_from_slice(&s.values[k * s.dim..(k + 1) * s.dim]);
            }
        }
    }
    for k in (0..cubes.len()).filter(|&k| mirrored(k)) {
        let q = &cubes[k];
        for v in g.vertices_in(q) {
            let h = g.height(v);
            if g.is_boundary_height(q, h) {
                continue;
            }
            let mut w = g.digits_of(v).to_vec();
            w[level - 1] = 1;
            let src = g.lookup(&LVertex::new(h, w))?;
            let val = out.value(src).to_vec();
            out.value_mut(v).copy_from_slice(&val);
        }
    }
    Ok(out)
}

/// Runs the cascade for `f` on its whole graph.
pub fn cascade(f: &PAMap, cfg: &EnergyConfig, symmetrize: bool) -> Result<EnergyCascade> {
    cfg.validate()?;
    let g = f.graph().clone();
    let n = g.depth();
    let maps = (0..=n + 1).map(|level| level_map(f, level, cfg, symmetrize)).collect::<Result<Vec<_>>>()?;
    let q = cfg.q;
    let mut diff_edge_energy = Vec::with_capacity(n + 2);
    for i in 0..=n + 1 {
        let next = if i == n + 1 { f } else { &maps[i + 1] };
        diff_edge_energy.push(edge_energies(&next.sub(&maps[i])?, q));
    }
    let mut map_edge_energy: Vec<Vec<f64>> = maps.iter().map(|m| edge_energies(m, q)).collect();
    map_edge_energy.push(edge_energies(f, q));
    let lip = f.lip();
    let lips: Vec<f64> = maps.iter().map(|m| m.lip()).collect();
    let rows = build_rows(&g, &diff_edge_energy, &lips, cfg.telescoping_factor(lip));
    Ok(EnergyCascade {
        config: cfg.clone(),
        symmetrized: symmetrize,
        target: f.clone(),
        maps,
        lip,
        lips,
        rows,
        diff_edge_energy,
        map_edge_energy,
    })
}

fn build_rows(g: &Arc<LaaksoGraph>, diff: &[Vec<f64>], lips: &[f64], factor: f64) -> Vec<CascadeRow> {
    let n = g.depth();
    let mut rows = Vec::new();
    for level in 0..=n + 1 {
        let count = g.cube_count(level);
        let mut per = vec![vec![0.0; count]; n + 2];
        for e in 0..g.edge_count() {
            let c = g.edge_cube_index(e, level);
            for (i, d) in diff.iter().enumerate().skip(level) {
                per[i][c] += d[e];
            }
        }
        let measure = {
            let c = g.cubes(level).expect("level checked by the loop bound");
            let m = g.cube_measure(&c[0]);
            *m.numer() as f64 / *m.denom() as f64
        };
        for cube in 0..count {
            let cumulative = (level..=n + 1).map(|i| per[i][cube]).sum();
            rows.push(CascadeRow {
                level,
                cube,
                diff_energy: per[level][cube],
                cumulative,
                bound: factor * measure,
                lip: lips[level],
            });
        }
    }
    rows
}

impl EnergyCascade {
    pub fn graph(&self) -> &Arc<LaaksoGraph> {
        self.target.graph()
    }

    /// Largest `cumulative - bound` over all rows.
    pub fn max_excess(&self) -> f64 {
        self.rows.iter().map(|r| r.cumulative - r.bound).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `E_q(F_{i+1} - F_i, X)` for `i = 0..=n+1`, the last entry being `f - F_{n+1}`.
    pub fn level_diff_energies(&self) -> Vec<f64> {
        self.diff_edge_energy.iter().map(|d| d.iter().sum()).collect()
    }

    /// `E_q(F_i, Q_0)` for `i = level(Q_0)..=n+1`, followed by `E_q(f, Q_0)`.
    pub fn energy_profile(&self, level: usize, cube: usize) -> Vec<f64> {
        let g = self.graph();
        let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| g.edge_cube_index(e, level) == cube).collect();
        self.map_edge_energy[level..].iter().map(|ee| edges.iter().map(|&e| ee[e]).sum()).collect()
    }

    /// Largest deviation `|F_i - f|` on the boundary vertices of the level-`i` cubes, `i >= 1`.
    pub fn boundary_defect(&self) -> f64 {
        let g = self.graph();
        let mut worst: f64 = 0.0;
        for (i, map) in self.maps.iter().enumerate().skip(1) {
            let u = g.params().scale_units(i);
            for v in 0..g.vertex_count() as u32 {
                let h = g.height(v);
                if h % u == 0 && h > 0 && h < g.denom() {
                    for (a, b) in map.value(v).iter().zip(self.target.value(v)) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|F_i(t, a, w) - F_i(t, b, w)|` over gated level-`i` intervals and digits at position `i`.
    pub fn symmetry_defect(&self, i: usize) -> Result<f64> {
        let g = self.graph();
        let map = &self.maps[i];
        let u = g.params().scale_units(i);
        let mut worst: f64 = 0.0;
        for v in 0..g.vertex_count() as u32 {
            let h = g.height(v);
            if h % u == 0 || !gated(g, i, h / u) || g.digit(v, i) == 1 {
                continue;
            }
            let mut w = g.digits_of(v).to_vec();
            w[i - 1] = 1;
            let t = g.lookup(&LVertex::new(h, w))?;
            for (a, b) in map.value(v).iter().zip(map.value(t)) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(worst)
    }

    /// Largest `|diam (F_{i+1} - F_i)(S) - diam f(S)|` over shortcut sets of levels `1..=n`.
    pub fn gate_defect(&self, families: &[ShortcutFamily]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for fam in families {
            let i = fam.level;
            let diff = self.maps[i + 1].sub(&self.maps[i])?;
            for s in &fam.sets {
                worst = worst.max((diff.diam_of(&s.members) - self.target.diam_of(&s.members)).abs());
            }
        }
        Ok(worst)
    }

    /// Writes `level,cube,diff_energy,cumulative,bound,lip` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "level,cube,diff_energy,cumulative,bound,lip")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{},{}", r.level, r.cube, r.diff_energy, r.cumulative, r.bound, r.lip)?;
        }
        Ok(())
    }
}
