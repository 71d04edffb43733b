//! Level-`i` shortcut sets of a Laakso graph.
//!
//! A set sits at the midpoint `t` of a level-`i` interval whose endpoints are
//! both level-`i` wormhole heights. Its members are `q(t, a, c, 1..1)` for a
//! prefix `a` of length `i - 1` and every `c` in `[M]`.

use laakso_core::{heights, LVertex, LaaksoGraph, VertexId};

use crate::error::{Result, ShortcutError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutSet {
    pub level: usize,
    /// Height in units of `1/D`.
    pub height: u64,
    pub prefix: Vec<u8>,
    /// Members ordered by the digit `c` at position `level`.
    pub members: Vec<VertexId>,
}

#[derive(Clone, Debug)]
pub struct ShortcutFamily {
    pub level: usize,
    pub sets: Vec<ShortcutSet>,
}

fn prefixes(m: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for w in &out {
            for c in 1..=m {
                let mut w2 = w.clone();
                w2.push(c);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

/// Shortcut family of one level, ordered by height and then by prefix.
pub fn shortcut_family(g: &LaaksoGraph, level: usize) -> Result<ShortcutFamily> {
    let n = g.depth();
    if level == 0 || level > n {
        return Err(ShortcutError::Param(format!("shortcut level {level} outside 1..={n}")));
    }
    let m = g.m() as u8;
    let words = prefixes(m, level - 1);
    let mut sets = Vec::new();
    for t in heights::jump_units(g.params().grid(), level) {
        for prefix in &words {
            let mut members = Vec::with_capacity(m as usize);
            for c in 1..=m {
                let mut w = prefix.clone();
                w.push(c);
                w.resize(n, 1);
                members.push(g.lookup(&LVertex::new(t, w))?);
            }
            sets.push(ShortcutSet { level, height: t, prefix: prefix.clone(), members });
        }
    }
    Ok(ShortcutFamily { level, sets })
}

/// Shortcut families of levels `1..=n`.
pub fn enumerate_shortcuts(g: &LaaksoGraph) -> Result<Vec<ShortcutFamily>> {
    (1..=g.depth()).map(|i| shortcut_family(g, i)).collect()
}
