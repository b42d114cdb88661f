use crate::{Error, Result};

/// Numerical knobs shared by the local-model operations. All fields must be
/// positive; `seed` makes every randomized check reproducible.
#[derive(Debug, Clone)]
pub struct NumericConfig {
    /// Tolerance for exact algebraic identities evaluated in floating point.
    pub tol_identity: f64,
    /// Tolerance for geometric checks (level sets, flows, transported points).
    pub tol_geom: f64,
    /// Grid resolution per axis for scans.
    pub grid: usize,
    /// Base step for the fixed-step integrator (refined by step halving).
    pub ode_step: f64,
    /// Initial panel count for adaptive quadrature.
    pub quadrature_points: usize,
    /// Perturbation parameter for the stable deformation of the local model.
    pub eps: f64,
    /// Seed for randomized identity checks.
    pub seed: u64,
    /// Differencing step for numerical Jacobians in scans.
    pub fd_step: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            tol_identity: 1e-12,
            tol_geom: 1e-6,
            grid: 16,
            ode_step: 1.0 / 256.0,
            quadrature_points: 64,
            eps: 0.01,
            seed: 0,
            fd_step: 1e-3,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.tol_identity,
            self.tol_geom,
            self.ode_step,
            self.eps,
            self.fd_step,
        ];
        if positive.iter().any(|&v| !(v > 0.0)) || self.grid == 0 || self.quadrature_points == 0 {
            return Err(Error::DegenerateEps);
        }
        Ok(())
    }
}
