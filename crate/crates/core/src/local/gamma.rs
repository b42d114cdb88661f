//! The critical-value curve of the perturbed model,
//! `gamma(theta) = -eps e^(4 i theta) - 2 eps e^(-2 i theta)`, and its
//! injectivity check.
//!
//! Two routes: a dense pairwise separation scan, and the algebraic
//! factorization `gamma(t1) - gamma(t2) =
//! -eps (w1 - w2)(w1 + w2 - 2/(w1 w2))` with `w_i = e^(2 i theta_i)`,
//! whose second factor cannot vanish for distinct unit `w_i`.

use num_complex::Complex64;

use crate::{Error, Result};

pub fn gamma(eps: f64, theta: f64) -> Complex64 {
    let e4 = Complex64::new(0.0, 4.0 * theta).exp();
    let e2m = Complex64::new(0.0, -2.0 * theta).exp();
    -eps * e4 - 2.0 * eps * e2m
}

#[derive(Debug, Clone)]
pub struct GammaReport {
    pub injective: bool,
    /// min |gamma(t1) - gamma(t2)| over sampled pairs separated by more
    /// than the angular tolerance (mod pi)
    pub min_separation: f64,
    /// min |w1 + w2 - 2/(w1 w2)| over the same pairs
    pub min_factor_magnitude: f64,
    /// max |(gamma(t1) - gamma(t2)) + eps (w1 - w2)(w1 + w2 - 2/(w1 w2))|
    /// over sampled pairs (agreement of the two routes)
    pub factorization_residual: f64,
    pub pairs: usize,
}

/// Pairwise injectivity scan on an `n`-point grid over one period
/// `[0, pi)`.
pub fn gamma_injectivity(eps: f64, n: usize) -> Result<GammaReport> {
    if !(eps > 0.0) {
        return Err(Error::DegenerateEps);
    }
    let n = n.max(64);
    let angular_tol = 2.0 * std::f64::consts::PI / n as f64;
    let thetas: Vec<f64> = (0..n)
        .map(|k| std::f64::consts::PI * k as f64 / n as f64)
        .collect();
    let values: Vec<Complex64> = thetas.iter().map(|&t| gamma(eps, t)).collect();
    let ws: Vec<Complex64> = thetas
        .iter()
        .map(|&t| Complex64::new(0.0, 2.0 * t).exp())
        .collect();

    let mut min_separation = f64::INFINITY;
    let mut min_factor = f64::INFINITY;
    let mut residual = 0.0f64;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let dt = (thetas[j] - thetas[i]).min(std::f64::consts::PI - (thetas[j] - thetas[i]));
            if dt <= angular_tol {
                continue;
            }
            pairs += 1;
            let diff = values[i] - values[j];
            min_separation = min_separation.min(diff.norm());
            let factor = ws[i] + ws[j] - 2.0 / (ws[i] * ws[j]);
            min_factor = min_factor.min(factor.norm());
            let alg = -eps * (ws[i] - ws[j]) * factor;
            residual = residual.max((diff - alg).norm());
        }
    }
    Ok(GammaReport {
        injective: min_separation > 0.0,
        min_separation,
        min_factor_magnitude: min_factor,
        factorization_residual: residual,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_value() {
        let g = gamma(0.01, 0.0);
        assert!((g - Complex64::new(-0.03, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn period_is_pi() {
        for k in 0..17 {
            let t = 0.19 * k as f64;
            let d = (gamma(0.01, t) - gamma(0.01, t + std::f64::consts::PI)).norm();
            assert!(d < 1e-14);
        }
    }

    #[test]
    fn injective_on_a_dense_grid() {
        let report = gamma_injectivity(0.01, 2000).unwrap();
        assert!(report.injective);
        assert!(report.min_separation > 0.0);
        assert!(report.min_factor_magnitude > 0.0);
        assert!(report.factorization_residual < 1e-12);
        assert!(gamma_injectivity(0.0, 100).is_err());
    }
}
