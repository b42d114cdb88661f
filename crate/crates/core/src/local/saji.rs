//! Fold/cusp classification of the perturbed local model along its
//! critical circle `r = -4 eps cos(3 theta)`, `z = 0`, `theta = pi s`.
//!
//! With the adapted fields `xi = d/dr`, `eta_1 = d/dx`, `eta_2 = d/dy`,
//! `eta_3 = d/theta + 4 eps sin(3 theta) d/dr`, the determinant functions
//! are `lambda_1 = 2(y cos t - x sin t)`, `lambda_2 = 2(x cos t + y sin t)`,
//! `lambda_3 = r + 4 eps cos(3 t)`; the degeneracy determinant along the
//! circle is `H = 32 eps sin(3 theta)`, so folds fill the circle except for
//! three cusps per period at `theta = 0, pi/3, 2 pi/3`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::NumericConfig;
use super::models::{ChartMap, LocalModel};
use crate::{Error, Result};

/// Closed forms of the three determinant functions.
pub fn lambda(eps: f64, r: f64, theta: f64, x: f64, y: f64) -> [f64; 3] {
    [
        2.0 * (y * theta.cos() - x * theta.sin()),
        2.0 * (x * theta.cos() + y * theta.sin()),
        r + 4.0 * eps * (3.0 * theta).cos(),
    ]
}

/// The degeneracy matrix `(eta_i lambda_j)` at a point of the critical
/// circle, from the analytic partial derivatives of the closed forms.
pub fn degeneracy_matrix(eps: f64, theta: f64) -> [[f64; 3]; 3] {
    // eta_1 = d/dx, eta_2 = d/dy, eta_3 = d/theta + 4 eps sin(3t) d/dr,
    // evaluated at x = y = 0, r = -4 eps cos(3t)
    let (sin_t, cos_t) = theta.sin_cos();
    let sin3 = (3.0 * theta).sin();
    [
        [-2.0 * sin_t, 2.0 * cos_t, 0.0],
        [2.0 * cos_t, 2.0 * sin_t, 0.0],
        // d lambda_1 / d theta = 2(-y sin - x cos) = 0 at x = y = 0, etc.
        [0.0, 0.0, -12.0 * eps * sin3 + 4.0 * eps * sin3],
    ]
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `H = det(eta_i lambda_j)` along the circle; closed form `32 eps sin(3t)`.
pub fn degeneracy_det(eps: f64, theta: f64) -> f64 {
    det3(&degeneracy_matrix(eps, theta))
}

/// Independent route: the determinant functions from central-difference
/// Jacobians of the evaluated model.
pub fn lambda_numeric(eps: f64, r: f64, theta: f64, x: f64, y: f64, h: f64) -> [f64; 3] {
    let model = LocalModel::Feps { eps };
    let eval = |r: f64, theta: f64, x: f64, y: f64| -> Complex64 {
        model.eval_raw(r, theta / PI, Complex64::new(x, y))
    };
    let d = |k: usize| -> Complex64 {
        let mut hi = [r, theta, x, y];
        let mut lo = hi;
        hi[k] += h;
        lo[k] -= h;
        (eval(hi[0], hi[1], hi[2], hi[3]) - eval(lo[0], lo[1], lo[2], lo[3])) / (2.0 * h)
    };
    let dr = d(0);
    let dtheta = d(1);
    let dx = d(2);
    let dy = d(3);
    let sin3 = (3.0 * theta).sin();
    let eta3 = dtheta + 4.0 * eps * sin3 * dr;
    let det = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    [det(dr, dx), det(dr, dy), det(dr, eta3)]
}

#[derive(Debug, Clone)]
pub struct SajiReport {
    /// cusp parameters in `[0, pi)`
    pub cusps: Vec<f64>,
    /// fold arcs between consecutive cusps, as `(start, end)` in theta
    pub folds: Vec<(f64, f64)>,
    /// max |H_analytic - 32 eps sin 3 theta| over the sampled circle
    pub h_residual: f64,
    /// max |lambda_numeric - lambda_closed_form| over the sampled circle
    pub lambda_residual: f64,
    /// min over cusps of |dH/dtheta| (2-nondegeneracy margin)
    pub cusp_nondegeneracy: f64,
    /// min over the sampled circle of the largest 3x3 minor of the
    /// Jacobian of (lambda_1, lambda_2, lambda_3)
    pub jacobian_rank_margin: f64,
}

/// Cusp locations from sign changes of `H` on a theta grid, by linear
/// interpolation (the grid estimate) followed by bisection.
pub fn cusp_locations(eps: f64, n: usize, refine: bool) -> Vec<f64> {
    let h = |theta: f64| degeneracy_det(eps, theta);
    let mut cusps = Vec::new();
    for k in 0..n {
        let t0 = PI * k as f64 / n as f64;
        let t1 = PI * (k + 1) as f64 / n as f64;
        let (v0, v1) = (h(t0), h(t1));
        if v0 == 0.0 {
            cusps.push(t0);
            continue;
        }
        if v0 * v1 < 0.0 {
            let mut est = t0 - v0 * (t1 - t0) / (v1 - v0);
            if refine {
                let (mut lo, mut hi, mut vlo) = (t0, t1, v0);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let vm = h(mid);
                    if vm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if vlo * vm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        vlo = vm;
                    }
                }
                est = 0.5 * (lo + hi);
            }
            cusps.push(est);
        }
    }
    // theta = pi is identified with theta = 0 on the critical circle, so a
    // root detected at the right endpoint is the cusp already counted at 0
    cusps.retain(|&c| c < PI - 1e-9);
    cusps
}

/// Classifies the critical circle of the perturbed model: folds everywhere
/// except three non-degenerate cusps per period.
pub fn saji_classify(eps: f64, cfg: &NumericConfig) -> Result<SajiReport> {
    if !(0.0 < eps && eps <= 0.1) {
        return Err(Error::DegenerateEps);
    }
    let n = (cfg.grid * 64).max(512);
    let mut h_residual = 0.0f64;
    let mut lambda_residual = 0.0f64;
    let mut jacobian_rank_margin = f64::INFINITY;
    for k in 0..n {
        let theta = PI * k as f64 / n as f64;
        let r = -4.0 * eps * (3.0 * theta).cos();
        let h_analytic = degeneracy_det(eps, theta);
        let h_closed = 32.0 * eps * (3.0 * theta).sin();
        h_residual = h_residual.max((h_analytic - h_closed).abs());

        let closed = lambda(eps, r, theta, 0.0, 0.0);
        let numeric = lambda_numeric(eps, r, theta, 0.0, 0.0, cfg.fd_step);
        for i in 0..3 {
            lambda_residual = lambda_residual.max((numeric[i] - closed[i]).abs());
        }

        // Jacobian of (lambda_1, lambda_2, lambda_3) in (r, theta, x, y)
        // at the critical point
        let (sin_t, cos_t) = theta.sin_cos();
        let jac: [[f64; 4]; 3] = [
            [0.0, 0.0, -2.0 * sin_t, 2.0 * cos_t],
            [0.0, 0.0, 2.0 * cos_t, 2.0 * sin_t],
            [1.0, -12.0 * eps * (3.0 * theta).sin(), 0.0, 0.0],
        ];
        let mut best = 0.0f64;
        for c0 in 0..4 {
            for c1 in (c0 + 1)..4 {
                for c2 in (c1 + 1)..4 {
                    let m = [
                        [jac[0][c0], jac[0][c1], jac[0][c2]],
                        [jac[1][c0], jac[1][c1], jac[1][c2]],
                        [jac[2][c0], jac[2][c1], jac[2][c2]],
                    ];
                    best = best.max(det3(&m).abs());
                }
            }
        }
        jacobian_rank_margin = jacobian_rank_margin.min(best);
    }

    let cusps = cusp_locations(eps, n, true);
    let mut cusp_nondegeneracy = f64::INFINITY;
    for &c in &cusps {
        // dH/dtheta restricted to the circle: 96 eps cos(3 theta)
        cusp_nondegeneracy = cusp_nondegeneracy.min((96.0 * eps * (3.0 * c).cos()).abs());
    }
    let mut folds = Vec::new();
    for (i, &c) in cusps.iter().enumerate() {
        let next = if i + 1 < cusps.len() {
            cusps[i + 1]
        } else {
            cusps[0] + PI
        };
        folds.push((c, next));
    }
    Ok(SajiReport {
        cusps,
        folds,
        h_residual,
        lambda_residual,
        cusp_nondegeneracy,
        jacobian_rank_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_and_cusp_examples() {
        let eps = 0.01;
        // theta = pi/6: H = 32 eps, a fold point
        assert!((degeneracy_det(eps, PI / 6.0) - 32.0 * eps).abs() < 1e-15);
        // theta = pi/3: H = 0 with dH/dtheta = -96 eps
        assert!(degeneracy_det(eps, PI / 3.0).abs() < 1e-15);
        assert!((96.0 * eps * (PI).cos() + 96.0 * eps).abs() < 1e-12);
    }

    #[test]
    fn three_cusps_at_the_expected_angles() {
        let cfg = NumericConfig::default();
        let report = saji_classify(0.01, &cfg).unwrap();
        assert_eq!(report.cusps.len(), 3);
        let expect = [0.0, PI / 3.0, 2.0 * PI / 3.0];
        for (c, e) in report.cusps.iter().zip(expect) {
            assert!((c - e).abs() < 1e-10, "cusp {c} vs {e}");
        }
        assert!(report.h_residual < 1e-10);
        assert!(report.cusp_nondegeneracy > 0.0);
        assert!(report.jacobian_rank_margin > 0.0);
        assert_eq!(report.folds.len(), 3);
    }

    #[test]
    fn grid_estimates_converge_quadratically() {
        let eps = 0.01;
        let err = |n: usize| -> f64 {
            cusp_locations(eps, n, false)
                .iter()
                .map(|&c| {
                    [0.0, PI / 3.0, 2.0 * PI / 3.0]
                        .iter()
                        .map(|e| (c - e).abs())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        // offset grids so roots do not land on grid points
        let e1 = err(61);
        let e2 = err(122);
        assert!(e1 > 0.0 && e2 > 0.0);
        let ratio = e1 / e2;
        assert!(ratio > 2.5, "convergence ratio {ratio}");
    }

    #[test]
    fn degenerate_eps_rejected() {
        let cfg = NumericConfig::default();
        assert!(saji_classify(0.0, &cfg).is_err());
    }
}
