//! The `x/y` profiles of a height and the midpoint parameter `p_G`.
//!
//! `x(t, l)` and `y(t, l)` are the nearest points of `W_{<=l}` at or below and
//! at or above `t`, with `x(t, 0) = 0`, `y(t, 0) = 1`, and `x = y = t` once
//! `l` reaches the level of `t`. All values are numerators over `P`.

use laakso_core::heights;

use crate::error::{DiamondError, Result};
use crate::graph::height_levels;

/// Mixed-radix digits `t_1, .., t_n` of `t / P` with `0 <= t_i < N_i`.
pub fn height_digits(grid: &[u32], t: u64) -> Result<Vec<u32>> {
    let p = heights::prefix_products(grid);
    let total = p[grid.len()];
    if t >= total {
        return Err(DiamondError::OffGrid(format!("{t}/{total} has no digit expansion")));
    }
    Ok((1..=grid.len()).map(|i| ((t / (total / p[i])) % grid[i - 1] as u64) as u32).collect())
}

fn level(grid: &[u32], t: u64) -> usize {
    let p = heights::prefix_products(grid);
    let total = p[grid.len()];
    if t == 0 || t == total {
        1
    } else {
        heights::level_of(grid, t).expect("interior grid point")
    }
}

/// `(x(t, l), y(t, l))` in units of `1/P`.
pub fn xy_profile(grid: &[u32], t: u64, l: usize) -> Result<(u64, u64)> {
    let p = heights::prefix_products(grid);
    let total = p[grid.len()];
    if t > total {
        return Err(DiamondError::OffGrid(format!("{t}/{total} lies outside [0, 1]")));
    }
    if l == 0 {
        return Ok((0, total));
    }
    if l >= level(grid, t) {
        return Ok((t, t));
    }
    let unit = total / p[l];
    let x = t / unit * unit;
    Ok((x, x + unit))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XYProfile {
    pub t: u64,
    pub denom: u64,
    /// `(x(t, l), y(t, l))` for `l = 0..=n`.
    pub pairs: Vec<(u64, u64)>,
}

impl XYProfile {
    pub fn new(grid: &[u32], t: u64) -> Result<Self> {
        let pairs = (0..=grid.len()).map(|l| xy_profile(grid, t, l)).collect::<Result<Vec<_>>>()?;
        Ok(Self { t, denom: *heights::prefix_products(grid).last().unwrap(), pairs })
    }

    /// Twice the midpoint of `[x(t, l), y(t, l)]`.
    pub fn doubled_midpoint(&self, l: usize) -> u64 {
        let (x, y) = self.pairs[l];
        x + y
    }
}

fn profile_at(grid: &[u32], t: u64, l: usize) -> (u64, u64) {
    if l > grid.len() {
        (t, t)
    } else {
        xy_profile(grid, t, l).expect("t ranges over the grid")
    }
}

/// Whether both midpoint conditions hold with step `p` for every `j < n` and every height.
pub fn midpoint_step_holds(grid: &[u32], p: usize) -> bool {
    let total = *heights::prefix_products(grid).last().unwrap();
    (0..=total).all(|t| {
        (0..grid.len()).all(|j| {
            let (x, y) = profile_at(grid, t, j);
            let mid2 = x + y;
            let (xp, yp) = profile_at(grid, t, j + p);
            (2 * t < mid2 || 2 * xp >= mid2) && (2 * t > mid2 || 2 * yp <= mid2)
        })
    })
}

/// Least `p >= 1` for which [`midpoint_step_holds`].
pub fn compute_p_g(grid: &[u32]) -> Result<usize> {
    if grid.is_empty() || grid.iter().any(|&n| n < 2 || n % 2 == 1) {
        return Err(DiamondError::Param(format!("subdivision counts {grid:?} must be even")));
    }
    // At p = n every x(t, j + p) equals t, so the search always stops.
    Ok((1..=grid.len()).find(|&p| midpoint_step_holds(grid, p)).unwrap_or(grid.len()))
}

/// Heights `t` with level exactly `j`, as numerators over `P`.
pub fn heights_of_level(grid: &[u32], j: usize) -> Vec<u64> {
    height_levels(grid).iter().enumerate().filter(|(_, &l)| l as usize == j).map(|(t, _)| t as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_profile() {
        assert_eq!(xy_profile(&[4, 4], 7, 1).unwrap(), (4, 8));
        assert_eq!(xy_profile(&[4, 4], 7, 0).unwrap(), (0, 16));
        assert_eq!(xy_profile(&[4, 4], 7, 2).unwrap(), (7, 7));
        assert!(xy_profile(&[4, 4], 17, 1).is_err());
    }

    #[test]
    fn small_p_g() {
        assert_eq!(compute_p_g(&[4, 4, 4]).unwrap(), 1);
        assert!(compute_p_g(&[5]).is_err());
    }
}
