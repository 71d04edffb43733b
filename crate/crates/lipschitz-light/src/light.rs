//! Empirical Lipschitz-light constant of the height map.
//!
//! For each sampled interval `I` and radii `r = |I| 2^{k/s}`, the ratio
//! between the largest `r`-component diameter of `h^{-1}(I)` in `d_eta` and
//! `r` is recorded. The sweep for one interval stops once the preimage is a
//! single component, after which the ratio only decreases.

use std::io::{self, Write};

use rayon::prelude::*;
use shortcut_metric::{EtaGraph, Metric};

use crate::classes::CubeInterval;
use crate::components::DistanceTable;
use crate::error::{LightError, Result};

/// Geometric radius grid with `steps_per_doubling` radii per factor of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RGrid {
    pub steps_per_doubling: u32,
}

impl Default for RGrid {
    fn default() -> Self {
        Self { steps_per_doubling: 2 }
    }
}

impl RGrid {
    pub fn radius(&self, base: f64, k: u32) -> f64 {
        base * 2f64.powf(k as f64 / self.steps_per_doubling as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LightRow {
    pub level: usize,
    pub index: u64,
    pub interval_units: u64,
    pub r: f64,
    pub components: usize,
    pub max_diameter: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct LightReport {
    pub rows: Vec<LightRow>,
    /// Largest ratio over all rows.
    pub constant: f64,
}

impl LightReport {
    /// Writes `level,index,interval_units,r,components,max_diameter,ratio` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "level,index,interval_units,r,components,max_diameter,ratio")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.level, r.index, r.interval_units, r.r, r.components, r.max_diameter, r.ratio
            )?;
        }
        Ok(())
    }
}

fn sweep(eg: &EtaGraph, interval: &CubeInterval, grid: RGrid) -> Result<Vec<LightRow>> {
    let g = eg.base();
    let table = DistanceTable::new(eg, &interval.preimage(g), Metric::Eta);
    let base = (interval.length_units(g) * eg.scale()) as f64;
    let diameter = table.diameter() as f64;
    let mut rows = Vec::new();
    for k in 0.. {
        let r = grid.radius(base, k);
        let comps = table.components(r)?;
        let max_diameter = comps.max_diameter();
        rows.push(LightRow {
            level: interval.level,
            index: interval.index,
            interval_units: base as u64,
            r,
            components: comps.len(),
            max_diameter,
            ratio: max_diameter as f64 / r,
        });
        if comps.len() == 1 && r >= diameter {
            break;
        }
    }
    Ok(rows)
}

/// Maximum over `intervals` and the radius grid of (largest component diameter) / `r`.
pub fn light_constant(eg: &EtaGraph, intervals: &[CubeInterval], grid: RGrid) -> Result<LightReport> {
    if intervals.is_empty() {
        return Err(LightError::Interval("empty interval family".into()));
    }
    if grid.steps_per_doubling == 0 {
        return Err(LightError::Radius("radius grid needs at least one step per doubling".into()));
    }
    let per: Vec<Vec<LightRow>> = intervals.par_iter().map(|i| sweep(eg, i, grid)).collect::<Result<_>>()?;
    let rows: Vec<LightRow> = per.into_iter().flatten().collect();
    let constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(LightReport { rows, constant })
}
