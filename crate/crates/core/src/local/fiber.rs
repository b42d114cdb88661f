//! Regular fibers of the local models as branched double covers of the
//! chart surface: branch points, Euler characteristics and the convexity
//! estimate used to identify the fiber topology.

use num_complex::Complex64;

use super::charts::LocalPoint;
use super::config::NumericConfig;
use super::models::{eval_local_model, LocalModel};
use crate::{Error, Result};

/// Base points over which the chart projection of the fiber fails to be a
/// local diffeomorphism: the solutions of `r e^(...) = w` with `z = 0`.
/// One Moebius point for the unperturbed model, two annulus points for its
/// double cover.
pub fn branch_points(model: LocalModel, w: Complex64) -> Result<Vec<LocalPoint>> {
    if w.norm() == 0.0 {
        return Err(Error::SingularValue);
    }
    let zero = Complex64::new(0.0, 0.0);
    let pts = match model {
        LocalModel::Fm => {
            // both sheet solutions [|w|, arg/pi] and [-|w|, arg/pi + 1]
            // are the same Moebius point
            let raw = [
                LocalPoint::m(w.norm(), w.arg() / std::f64::consts::PI, zero),
                LocalPoint::m(-w.norm(), w.arg() / std::f64::consts::PI + 1.0, zero),
            ];
            dedupe(&raw)
        }
        LocalModel::Fa => {
            let s = w.arg() / (2.0 * std::f64::consts::PI);
            let raw = [
                LocalPoint::a(w.norm(), s, zero),
                LocalPoint::a(-w.norm(), s + 0.5, zero),
            ];
            dedupe(&raw)
        }
        LocalModel::Feps { .. } => return Err(Error::SingularValue),
    };
    for p in &pts {
        let v = eval_local_model(model, p)?;
        debug_assert!((v - w).norm() < 1e-10 * (1.0 + w.norm()));
    }
    Ok(pts)
}

fn dedupe(points: &[LocalPoint]) -> Vec<LocalPoint> {
    let mut out: Vec<LocalPoint> = Vec::new();
    for p in points {
        if out.iter().all(|q| q.chart_dist(p) > 1e-9) {
            out.push(p.normalized());
        }
    }
    out
}

/// Euler characteristic of a double cover branched at `branch_count`
/// points: `2 chi(base) - branch_count`.
pub fn euler_double_branched_cover(base_chi: i64, branch_count: usize) -> i64 {
    2 * base_chi - branch_count as i64
}

/// Euler characteristic of the regular fiber over `w != 0` via the
/// branched-cover count; the open Moebius band and annulus both have
/// `chi = 0`, so the fiber values are -1 and -2.
pub fn fiber_euler(model: LocalModel, w: Complex64) -> Result<i64> {
    let branches = branch_points(model, w)?;
    Ok(euler_double_branched_cover(0, branches.len()))
}

/// Convexity margin for the local square-root branches
/// `q(xi) = w - (eta + xi)^2` with `eta^2 = w`:
/// verifies `Re(1 + xi q''/q') > 0` over the disk `|xi| <= eps`, for both
/// branches, returning the minimum margin.
pub fn convexity_check(w: Complex64, eps: f64, cfg: &NumericConfig) -> Result<(bool, f64)> {
    if w.norm() == 0.0 {
        return Err(Error::SingularValue);
    }
    let eta = w.sqrt();
    if eps >= eta.norm() {
        return Err(Error::DerivativeVanishes {
            eps,
            eta: eta.norm(),
        });
    }
    let n_r = cfg.grid.max(4);
    let n_phi = 4 * cfg.grid.max(4);
    let mut min_margin = f64::INFINITY;
    for sign in [1.0f64, -1.0] {
        let eta = eta * sign;
        for i in 0..=n_r {
            let rad = eps * i as f64 / n_r as f64;
            for k in 0..n_phi {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
                let xi = Complex64::from_polar(rad, phi);
                let denom = eta + xi;
                if denom.norm() < 1e-14 {
                    return Err(Error::DerivativeVanishes {
                        eps,
                        eta: eta.norm(),
                    });
                }
                // q' = -2(eta + xi), q'' = -2
                let expr = Complex64::new(1.0, 0.0) + xi / denom;
                min_margin = min_margin.min(expr.re);
            }
        }
    }
    Ok((min_margin > 0.0, min_margin))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_point_examples() {
        let pts = branch_points(LocalModel::Fa, Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].chart_dist(&LocalPoint::a(0.5, 0.0, Complex64::new(0.0, 0.0))) < 1e-12);
        assert!(pts[1].chart_dist(&LocalPoint::a(-0.5, 0.5, Complex64::new(0.0, 0.0))) < 1e-12);

        let pts = branch_points(LocalModel::Fm, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].chart_dist(&LocalPoint::m(1.0, 0.0, Complex64::new(0.0, 0.0))) < 1e-12);

        let pts = branch_points(LocalModel::Fa, Complex64::new(-0.25, 0.0)).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].chart_dist(&LocalPoint::a(0.25, 0.5, Complex64::new(0.0, 0.0))) < 1e-12);
        assert!(pts[1].chart_dist(&LocalPoint::a(-0.25, 0.0, Complex64::new(0.0, 0.0))) < 1e-12);

        assert!(branch_points(LocalModel::Fm, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn fiber_euler_values() {
        assert_eq!(fiber_euler(LocalModel::Fm, Complex64::new(1.0, 0.0)).unwrap(), -1);
        assert_eq!(fiber_euler(LocalModel::Fa, Complex64::new(0.5, 0.0)).unwrap(), -2);
        assert_eq!(euler_double_branched_cover(0, 0), 0);
    }

    #[test]
    fn convexity_margins() {
        let cfg = NumericConfig::default();
        let (ok, margin) = convexity_check(Complex64::new(1.0, 0.0), 0.05, &cfg).unwrap();
        assert!(ok);
        assert!(margin >= 1.0 - 0.05 / (1.0 - 0.05) - 1e-12);

        let (_, margin) = convexity_check(Complex64::new(1.0, 0.0), 1e-4, &cfg).unwrap();
        assert!(margin > 0.999);

        // |eta| = 0.5 for w = 0.25
        let (ok, margin) = convexity_check(Complex64::new(0.25, 0.0), 0.05, &cfg).unwrap();
        assert!(ok);
        assert!(margin >= 1.0 - 0.05 / (0.5 - 0.05) - 1e-12);

        assert!(convexity_check(Complex64::new(1e-4, 0.0), 0.05, &cfg).is_err());
    }
}
