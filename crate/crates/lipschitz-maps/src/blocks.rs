//! Building blocks: the tent map `g_i`, the orthogonal induction step, and the
//! `R^2` and blocked `l_q` maps assembled from them.

use std::collections::HashMap;
use std::sync::Arc;

use laakso_core::{heights, LVertex, LaaksoGraph, VertexId, WILDCARD};
use shortcut_metric::EtaSchedule;

use crate::error::{MapError, Result};
use crate::pamap::{Norm, PAMap};

/// Relative tolerance of the affine-hypothesis check.
pub const AFFINE_TOLERANCE: f64 = 1e-12;

fn check_level(g: &LaaksoGraph, i: usize) -> Result<()> {
    if i == 0 || i > g.depth() {
        return Err(MapError::Level { level: i, depth: g.depth() });
    }
    Ok(())
}

fn to_f64(r: laakso_core::Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Tent value `g_i(v)` in units of `1/D`.
///
/// On a level-`i` interval `I` with both endpoints in `W_i^h` the value is
/// `+(|I|/2 - |t - t_0|)` on digit `M` at position `i`, its negative on digit
/// `1`, and `0` on the other digits. Every other interval carries `0`.
pub fn tent_units(g: &LaaksoGraph, i: usize, v: VertexId) -> i64 {
    let u = g.params().scale_units(i);
    let h = g.height(v);
    let k = h / u;
    let m = h - k * u;
    if m == 0 || !heights::interval_is_gated(g.params().grid(), i, k) {
        return 0;
    }
    let val = (u / 2) as i64 - (m as i64 - (u / 2) as i64).abs();
    match g.digit(v, i) {
        d if d == g.m() as u8 => val,
        1 => -val,
        _ => 0,
    }
}

/// `g_i` as a scalar map.
pub fn tent_block(g: &Arc<LaaksoGraph>, i: usize) -> Result<PAMap> {
    check_level(g, i)?;
    let d = g.denom() as f64;
    let values = (0..g.vertex_count() as u32).map(|v| tent_units(g, i, v) as f64 / d).collect();
    PAMap::scalar(g.clone(), values)
}

fn prefix_matches(g: &LaaksoGraph, v: VertexId, prefix: &[u8]) -> bool {
    g.digits_of(v).iter().zip(prefix).all(|(&d, &p)| d == WILDCARD || d == p)
}

fn anchor(g: &LaaksoGraph, h: u64, prefix: &[u8]) -> Result<VertexId> {
    let mut w = prefix.to_vec();
    w.resize(g.depth(), 1);
    Ok(g.lookup(&LVertex::new(h, w))?)
}

fn words(m: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=m).map(move |c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

/// Checks that `f` is affine on `q(J x {a})` for every level-`i` interval `J` and `a` in `[M]^i`.
pub fn check_affine(f: &PAMap, i: usize) -> Result<()> {
    let g = f.graph();
    check_level(g, i)?;
    let u = g.params().scale_units(i);
    let scale = f.values().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = AFFINE_TOLERANCE * scale;
    let dim = f.dim();
    for k in 0..g.params().prefix_product(i) {
        let (lo, hi) = (k * u, (k + 1) * u);
        for a in words(g.m() as u8, g.prefix_len(i)) {
            let fl = f.value(anchor(g, lo, &a)?).to_vec();
            let fh = f.value(anchor(g, hi, &a)?).to_vec();
            let mut worst: f64 = 0.0;
            for h in lo..=hi {
                let s = (h - lo) as f64 / u as f64;
                for v in g.vertices_at(h).filter(|&v| prefix_matches(g, v, &a)) {
                    let val = f.value(v);
                    for c in 0..dim {
                        worst = worst.max((val[c] - (fl[c] + s * (fh[c] - fl[c]))).abs());
                    }
                }
            }
            if worst > tol {
                return Err(MapError::NotAffine { level: i, interval: k, deviation: worst });
            }
        }
    }
    Ok(())
}

/// Unit vector orthogonal to `d`, obtained by a quarter turn; `(0, 1)` when `d = 0`.
pub fn orthogonal_direction(d: [f64; 2]) -> [f64; 2] {
    let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
    if n == 0.0 {
        [0.0, 1.0]
    } else {
        [-d[1] / n, d[0] / n]
    }
}

/// `F = f + A g_i v_{J,a}` on every gated level-`i` interval `J` and prefix `a` in `[M]^{i-1}`,
/// with `v_{J,a}` orthogonal to the affine direction of `f` there; `F = f` elsewhere.
pub fn orthogonal_step(f: &PAMap, i: usize, amplitude: f64) -> Result<PAMap> {
    if f.dim() != 2 || *f.norm() != Norm::Euclidean {
        return Err(MapError::Invalid("orthogonal step needs a Euclidean R^2-valued map".into()));
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(MapError::Invalid(format!("amplitude {amplitude} must be positive")));
    }
    check_affine(f, i)?;
    let g = f.graph().clone();
    let u = g.params().scale_units(i);
    let d = g.denom() as f64;
    let grid = g.params().grid();
    let mut out = f.clone();
    let mut dirs: HashMap<(u64, Vec<u8>), [f64; 2]> = HashMap::new();
    for k in 0..g.params().prefix_product(i) {
        if !heights::interval_is_gated(grid, i, k) {
            continue;
        }
        let (lo, hi) = (k * u, (k + 1) * u);
        for h in lo + 1..hi {
            for v in g.vertices_at(h) {
                let t = tent_units(&g, i, v);
                if t == 0 {
                    continue;
                }
                let prefix = g.digits_of(v)[..i - 1].to_vec();
                let key = (k, prefix);
                let dir = match dirs.get(&key) {
                    Some(d) => *d,
                    None => {
                        let a = f.value(anchor(&g, lo, &key.1)?);
                        let b = f.value(anchor(&g, hi, &key.1)?);
                        let dv = orthogonal_direction([b[0] - a[0], b[1] - a[1]]);
                        dirs.insert(key, dv);
                        dv
                    }
                };
                let s = amplitude * t as f64 / d;
                let val = out.value_mut(v);
                val[0] += s * dir[0];
                val[1] += s * dir[1];
            }
        }
    }
    Ok(out)
}

fn sorted_levels(g: &LaaksoGraph, levels: &[usize]) -> Result<Vec<usize>> {
    if levels.is_empty() {
        return Err(MapError::Invalid("empty level set".into()));
    }
    let mut ls = levels.to_vec();
    ls.sort_unstable();
    ls.dedup();
    for &i in &ls {
        check_level(g, i)?;
    }
    Ok(ls)
}

/// Starts from `(eta_{i_1} g_{i_1}, 0)` and applies the orthogonal step with `A = eta_i` for the remaining levels.
pub fn bad_map_r2(g: &Arc<LaaksoGraph>, levels: &[usize], eta: &EtaSchedule) -> Result<PAMap> {
    let ls = sorted_levels(g, levels)?;
    if eta.len() < *ls.last().unwrap() {
        return Err(MapError::Invalid("eta schedule shorter than the largest level".into()));
    }
    let first = ls[0];
    let e0 = to_f64(eta.eta(first));
    let d = g.denom() as f64;
    let mut values = vec![0.0; 2 * g.vertex_count()];
    for v in 0..g.vertex_count() as u32 {
        values[2 * v as usize] = e0 * tent_units(g, first, v) as f64 / d;
    }
    let mut f = PAMap::new(g.clone(), 2, values, Norm::Euclidean)?;
    for &i in &ls[1..] {
        f = orthogonal_step(&f, i, to_f64(eta.eta(i)))?;
    }
    Ok(f)
}

/// Per block `I_m`, the coordinates `(eta_i g_i)_{i in I_m}`; the target carries the block-`l_q` norm.
pub fn bad_map_blocked_lq(g: &Arc<LaaksoGraph>, blocks: &[Vec<usize>], eta: &EtaSchedule, q: f64) -> Result<PAMap> {
    if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
        return Err(MapError::Invalid("blocks must be non-empty".into()));
    }
    let levels: Vec<usize> = blocks.concat();
    let mut seen = levels.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != levels.len() {
        return Err(MapError::Invalid("blocks overlap".into()));
    }
    for &i in &levels {
        check_level(g, i)?;
        if i > eta.len() {
            return Err(MapError::Invalid("eta schedule shorter than the largest level".into()));
        }
    }
    let dim = levels.len();
    let d = g.denom() as f64;
    let mut values = vec![0.0; dim * g.vertex_count()];
    for v in 0..g.vertex_count() as u32 {
        for (c, &i) in levels.iter().enumerate() {
            values[v as usize * dim + c] = to_f64(eta.eta(i)) * tent_units(g, i, v) as f64 / d;
        }
    }
    let mut coord_blocks = Vec::new();
    let mut next = 0;
    for b in blocks {
        coord_blocks.push((next..next + b.len()).collect());
        next += b.len();
    }
    PAMap::new(g.clone(), dim, values, Norm::BlockLq { q, blocks: coord_blocks })
}

/// Lipschitz constant of each block component `f_m` (the whole map for a Euclidean target).
pub fn block_lips(f: &PAMap) -> Vec<f64> {
    match f.norm() {
        Norm::Euclidean => vec![f.lip()],
        Norm::BlockLq { q, blocks } => {
            let g = f.graph();
            let d = g.denom() as f64;
            blocks
                .iter()
                .map(|b| {
                    let sub = Norm::BlockLq { q: *q, blocks: vec![(0..b.len()).collect()] };
                    g.edges()
                        .iter()
                        .map(|&[x, y]| {
                            let diff: Vec<f64> = b.iter().map(|&k| f.value(x)[k] - f.value(y)[k]).collect();
                            sub.eval(&diff) * d
                        })
                        .fold(0.0, f64::max)
                })
                .collect()
        }
    }
}
