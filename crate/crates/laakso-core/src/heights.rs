//! Integer arithmetic on grid heights.
//!
//! A grid `(N_1, .., N_K)` fixes the unit `1/P_K` with `P_K = N_1 * .. * N_K`.
//! Every height handled here is an integer numerator in that unit, so the
//! level-`i` scale `1/P_i` is the integer `P_K / P_i`.

/// Prefix products `P_0 = 1, P_1, .., P_K`.
pub fn prefix_products(grid: &[u32]) -> Vec<u64> {
    let mut out = Vec::with_capacity(grid.len() + 1);
    out.push(1u64);
    for &n in grid {
        let last = *out.last().unwrap();
        out.push(last * n as u64);
    }
    out
}

/// Number of grid units in one level-`i` interval, `P_K / P_i`.
pub fn level_unit(grid: &[u32], i: usize) -> u64 {
    let p = prefix_products(grid);
    p[grid.len()] / p[i]
}

/// Least `j` with `idx / P_K` in `W_{<=j}`, or `None` at the endpoints 0 and 1.
pub fn level_of(grid: &[u32], idx: u64) -> Option<usize> {
    let p = prefix_products(grid);
    let total = p[grid.len()];
    if idx == 0 || idx >= total {
        return None;
    }
    (1..=grid.len()).find(|&j| idx % (total / p[j]) == 0)
}

/// `W_i^h` in grid units: the points `k / P_i` in `(0, 1)` with `k` not a multiple of `N_i`.
pub fn wormhole_units(grid: &[u32], i: usize) -> Vec<u64> {
    assert!(i >= 1 && i <= grid.len(), "wormhole level out of range");
    let p = prefix_products(grid);
    let unit = p[grid.len()] / p[i];
    let ni = grid[i - 1] as u64;
    (1..p[i]).filter(|k| k % ni != 0).map(|k| k * unit).collect()
}

/// Heights of level-`i` shortcut sets, `J_i^h`, in grid units.
///
/// These are the midpoints of level-`i` intervals whose two endpoints lie in
/// `W_i^h`. Requires `i < K` so that the midpoint is a grid point.
pub fn jump_units(grid: &[u32], i: usize) -> Vec<u64> {
    assert!(i >= 1 && i < grid.len(), "jump level out of range");
    let p = prefix_products(grid);
    let unit = p[grid.len()] / p[i];
    let ni = grid[i - 1] as u64;
    (0..p[i])
        .filter(|k| {
            let r = k % ni;
            r >= 1 && r + 1 < ni
        })
        .map(|k| k * unit + unit / 2)
        .collect()
}

/// Whether the level-`i` interval `[k unit, (k+1) unit]` has both endpoints in `W_i^h`.
pub fn interval_is_gated(grid: &[u32], i: usize, k: u64) -> bool {
    let r = k % grid[i - 1] as u64;
    r >= 1 && r + 1 < grid[i - 1] as u64
}

/// Whether some point of `W_j^h` lies in the closed range `[a, b]` of grid units.
pub fn wormhole_meets(grid: &[u32], j: usize, a: u64, b: u64) -> bool {
    let p = prefix_products(grid);
    let unit = p[grid.len()] / p[j];
    let nj = grid[j - 1] as u64;
    let lo = a.div_ceil(unit).max(1);
    let hi = (b / unit).min(p[j] - 1);
    if lo > hi {
        return false;
    }
    hi > lo || lo % nj != 0
}

/// Largest point of `W_j^h` strictly below `a`, in grid units.
pub fn wormhole_below(grid: &[u32], j: usize, a: u64) -> Option<u64> {
    let p = prefix_products(grid);
    let unit = p[grid.len()] / p[j];
    let nj = grid[j - 1] as u64;
    if a == 0 {
        return None;
    }
    let mut k = (a - 1) / unit;
    k = k.min(p[j] - 1);
    while k >= 1 && k % nj == 0 {
        k -= 1;
    }
    (k >= 1).then_some(k * unit)
}

/// Smallest point of `W_j^h` strictly above `b`, in grid units.
pub fn wormhole_above(grid: &[u32], j: usize, b: u64) -> Option<u64> {
    let p = prefix_products(grid);
    let unit = p[grid.len()] / p[j];
    let nj = grid[j - 1] as u64;
    let mut k = b / unit + 1;
    while k < p[j] && k % nj == 0 {
        k += 1;
    }
    (k < p[j]).then_some(k * unit)
}

/// Distance in grid units from the set `{a, b}` to `W_j^h`.
pub fn distance_to_wormholes(grid: &[u32], j: usize, a: u64, b: u64) -> u64 {
    let mut best = u64::MAX;
    for x in [a, b] {
        if wormhole_meets(grid, j, x, x) {
            return 0;
        }
        if let Some(w) = wormhole_below(grid, j, x) {
            best = best.min(x - w);
        }
        if let Some(w) = wormhole_above(grid, j, x) {
            best = best.min(w - x);
        }
    }
    best
}
