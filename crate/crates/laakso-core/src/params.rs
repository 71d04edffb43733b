use crate::error::{LaaksoError, Result};
use crate::heights;
use crate::Rational;

/// Default refusal threshold for `D * M^n`.
pub const DEFAULT_VERTEX_CAP: u64 = 5_000_000;

/// Branching factor and grid sequence of a depth-`n` Laakso graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaaksoParams {
    m: u32,
    grid: Vec<u32>,
}

/// Hausdorff dimension and scale ratio reported for a parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dimension {
    pub s: f64,
    pub theta: f64,
    /// False when the grid is not constant and the values come from its geometric mean.
    pub exact: bool,
}

impl LaaksoParams {
    /// `grid` holds `N_1, .., N_{n+1}`; the depth is `grid.len() - 1`.
    pub fn new(m: u32, grid: Vec<u32>) -> Result<Self> {
        if m < 2 {
            return Err(LaaksoError::Param(format!("branching M = {m} must be at least 2")));
        }
        if grid.len() < 2 {
            return Err(LaaksoError::Param(format!(
                "grid must have length n+1 >= 2, got {}",
                grid.len()
            )));
        }
        for (i, &n) in grid.iter().enumerate() {
            if n < 4 || n % 2 != 0 {
                return Err(LaaksoError::Param(format!(
                    "N_{} = {n} must be even and at least 4",
                    i + 1
                )));
            }
        }
        let mut prod: u64 = 1;
        for &n in &grid {
            prod = prod
                .checked_mul(n as u64)
                .filter(|p| *p < (1u64 << 40))
                .ok_or_else(|| LaaksoError::Param("grid product overflows".into()))?;
        }
        Ok(Self { m, grid })
    }

    /// Constant grid `N_i = n_grid` at the given depth.
    pub fn constant(m: u32, n_grid: u32, depth: usize) -> Result<Self> {
        Self::new(m, vec![n_grid; depth + 1])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn grid(&self) -> &[u32] {
        &self.grid
    }

    pub fn depth(&self) -> usize {
        self.grid.len() - 1
    }

    /// `D = N_1 * .. * N_{n+1}`, the number of height steps.
    pub fn denom(&self) -> u64 {
        self.grid.iter().map(|&n| n as u64).product()
    }

    /// `P_i = N_1 * .. * N_i`.
    pub fn prefix_product(&self, i: usize) -> u64 {
        self.grid[..i].iter().map(|&n| n as u64).product()
    }

    /// `delta_i` in units of `1/D`.
    pub fn scale_units(&self, i: usize) -> u64 {
        self.denom() / self.prefix_product(i)
    }

    /// `delta_i = 1 / (N_1 * .. * N_i)`.
    pub fn scale(&self, i: usize) -> Rational {
        Rational::new(1, self.prefix_product(i) as i64)
    }

    pub fn is_constant(&self) -> bool {
        self.grid.iter().all(|&n| n == self.grid[0])
    }

    pub fn dimension(&self) -> Dimension {
        let ln_m = (self.m as f64).ln();
        if self.is_constant() {
            let n = self.grid[0] as f64;
            Dimension { s: 1.0 + ln_m / n.ln(), theta: 1.0 / n, exact: true }
        } else {
            let mean = self.grid.iter().map(|&n| (n as f64).ln()).sum::<f64>() / self.grid.len() as f64;
            Dimension { s: 1.0 + ln_m / mean, theta: (-mean).exp(), exact: false }
        }
    }

    /// `D * M^n`, an upper bound for the vertex count used by the size guard.
    pub fn vertex_bound(&self) -> u64 {
        self.denom().saturating_mul((self.m as u64).saturating_pow(self.depth() as u32))
    }

    /// Level of a height numerator: `Some(l)` when `idx/D` lies in `W_l^h`, `None` at 0 and 1.
    pub fn height_level(&self, idx: u64) -> Option<usize> {
        heights::level_of(&self.grid, idx)
    }

    /// `W_i^h` for `1 <= i <= n+1`, as exact rationals in increasing order.
    pub fn wormholes(&self, i: usize) -> Result<Vec<Rational>> {
        let units = self.wormholes_units(i)?;
        let d = self.denom() as i64;
        Ok(units.into_iter().map(|u| Rational::new(u as i64, d)).collect())
    }

    pub fn wormholes_units(&self, i: usize) -> Result<Vec<u64>> {
        if i < 1 || i > self.grid.len() {
            return Err(LaaksoError::Level { level: i, min: 1, max: self.grid.len() });
        }
        Ok(heights::wormhole_units(&self.grid, i))
    }
}
