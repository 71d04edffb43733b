use crate::error::{EnergyError, Result};

/// Regularisation added to squared slopes in the reweighting scheme.
pub const IRLS_EPSILON: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyConfig {
    pub q: f64,
    /// Uniform-convexity constant `K_q` of the target norm.
    pub k_q: f64,
    /// Stop once the relative energy decrease of one sweep falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        Self { q: 2.0, k_q: 1.0, tolerance: 1e-10, max_iterations: 10_000 }
    }
}

impl EnergyConfig {
    pub fn new(q: f64, k_q: f64, tolerance: f64, max_iterations: usize) -> Result<Self> {
        let cfg = Self { q, k_q, tolerance, max_iterations };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Quadratic energy with Euclidean targets.
    pub fn quadratic() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 2.0 && self.q.is_finite()) {
            return Err(EnergyError::Config(format!("q = {} must be a finite real >= 2", self.q)));
        }
        if !(self.k_q >= 1.0 && self.k_q.is_finite()) {
            return Err(EnergyError::Config(format!("K_q = {} must be >= 1", self.k_q)));
        }
        if !(self.tolerance > 0.0) {
            return Err(EnergyError::Config(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(EnergyError::Config("max_iterations must be positive".into()));
        }
        Ok(())
    }

    pub fn is_quadratic(&self) -> bool {
        self.q == 2.0
    }

    /// Constant `2 (2 K_q)^-q` of the variational inequality.
    pub fn variational_constant(&self) -> f64 {
        2.0 * (2.0 * self.k_q).powf(-self.q)
    }

    /// Telescoping bound `(2 K_q L)^q / 2` per unit of measure.
    pub fn telescoping_factor(&self, lip: f64) -> f64 {
        0.5 * (2.0 * self.k_q * lip).powf(self.q)
    }
}
