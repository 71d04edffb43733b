//! Closed-form distance: `d(x, y) = 2 l - |h(x) - h(y)|`, where `l` is the least
//! length of an interval that contains both heights and meets `W_j^h` for every
//! digit level `j` at which the two points differ.

use crate::error::Result;
use crate::graph::{differing_levels, LVertex, LaaksoGraph, VertexId};
use crate::heights;
use crate::Rational;

/// Above this many unresolved levels the formula falls back to graph search.
pub const FORMULA_ENUMERATION_CAP: usize = 12;

impl LaaksoGraph {
    /// Distance computed from the closed form, as an exact rational.
    pub fn dist_formula(&self, x: &LVertex, y: &LVertex) -> Result<Rational> {
        let a = self.lookup(x)?;
        let b = self.lookup(y)?;
        Ok(self.units_to_rational(self.dist_formula_units(a, b)))
    }

    /// Closed-form distance in units of `1/D`.
    pub fn dist_formula_units(&self, a: VertexId, b: VertexId) -> u64 {
        let delta = differing_levels(self.digits_of(a), self.digits_of(b));
        let ha = self.height(a);
        let hb = self.height(b);
        match minimal_envelope(self.params().grid(), &delta, ha.min(hb), ha.max(hb)) {
            Some(len) => 2 * len - ha.abs_diff(hb),
            None => self.dist_units(a, b),
        }
    }
}

/// Least length of an interval containing `[lo, hi]` that meets `W_j^h` for each `j` in `levels`.
///
/// Returns `None` when more than [`FORMULA_ENUMERATION_CAP`] levels need an extension.
pub fn minimal_envelope(grid: &[u32], levels: &[usize], lo: u64, hi: u64) -> Option<u64> {
    let mut sides: Vec<(Option<u64>, Option<u64>)> = Vec::new();
    for &j in levels {
        if heights::wormhole_meets(grid, j, lo, hi) {
            continue;
        }
        sides.push((heights::wormhole_below(grid, j, lo), heights::wormhole_above(grid, j, hi)));
    }
    if sides.len() > FORMULA_ENUMERATION_CAP {
        return None;
    }
    let mut best = u64::MAX;
    for mask in 0u32..(1u32 << sides.len()) {
        let mut a = lo;
        let mut b = hi;
        let mut ok = true;
        for (k, &(left, right)) in sides.iter().enumerate() {
            let pick = if mask & (1 << k) == 0 { left } else { right };
            match (pick, mask & (1 << k) == 0) {
                (Some(p), true) => a = a.min(p),
                (Some(p), false) => b = b.max(p),
                (None, _) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = best.min(b - a);
        }
    }
    Some(best)
}
