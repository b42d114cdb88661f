//! The level-set vector field and the isotopy that pushes the attaching
//! circles of a cover singularity into a single fiber.
//!
//! On the level set `omega = -Re Fa = -1/2` the field
//! `V = rho_z V_z + rho_r V_r` satisfies `V(omega) = 0` and `V(eta) = 1`
//! for `eta = Im Fa`. Flowing each point of an attaching circle for time
//! `-t eta(p)` scales `eta` by `1 - t`; at `t = 1` the circle lies in
//! `Fa^-1(1/2)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::charts::LocalPoint;
use super::config::NumericConfig;
use super::profile::{rho_r, rho_z};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `omega = -Re Fa` in annulus chart coordinates.
pub fn omega(p: &LocalPoint) -> f64 {
    -(p.r * (TWO_PI * p.s).cos() + p.x() * p.x() - p.y() * p.y())
}

/// `eta = Im Fa`.
pub fn eta(p: &LocalPoint) -> f64 {
    p.r * (TWO_PI * p.s).sin() + 2.0 * p.x() * p.y()
}

/// The raw vector field `(dr, ds, dx, dy)`; no level check, used by the
/// integrator. The `1/r` pole of the radial part is masked by its cutoff
/// and the `1/|z|^2` pole of the fiber part by `rho_z`.
pub fn vector_field_raw(p: &LocalPoint) -> Result<[f64; 4]> {
    let z_abs = p.z.norm();
    let rr = rho_r(z_abs);
    let rz = rho_z(z_abs);
    let mut v = [0.0f64; 4];
    if rr > 0.0 {
        if p.r.abs() < 0.05 {
            return Err(Error::OutsideFlowDomain);
        }
        let (sin_s, cos_s) = (TWO_PI * p.s).sin_cos();
        v[0] += rr * sin_s;
        v[1] += rr * cos_s / (TWO_PI * p.r);
    }
    if rz > 0.0 {
        let n2 = p.z.norm_sqr();
        v[2] += rz * p.y() / (2.0 * n2);
        v[3] += rz * p.x() / (2.0 * n2);
    }
    Ok(v)
}

/// The field at a point of the level set `omega = -1/2`, with
/// finite-difference verification that `V(omega) ~ 0` and `V(eta) ~ 1`.
pub fn flow_field(p: &LocalPoint, cfg: &NumericConfig) -> Result<([f64; 4], f64, f64)> {
    if (omega(p) + 0.5).abs() >= cfg.tol_geom {
        return Err(Error::OutsideFlowDomain);
    }
    let v = vector_field_raw(p)?;
    let h = 1e-5;
    let shift = |sign: f64| {
        LocalPoint::a(
            p.r + sign * h * v[0],
            p.s + sign * h * v[1],
            Complex64::new(p.x() + sign * h * v[2], p.y() + sign * h * v[3]),
        )
    };
    let (hi, lo) = (shift(1.0), shift(-1.0));
    let d_omega = (omega(&hi) - omega(&lo)) / (2.0 * h);
    let d_eta = (eta(&hi) - eta(&lo)) / (2.0 * h);
    Ok((v, d_omega, d_eta))
}

/// A sampled closed curve in a chart, with per-sample scalar metadata.
#[derive(Debug, Clone)]
pub struct TracedCurve {
    pub samples: Vec<LocalPoint>,
    pub closed: bool,
    pub metadata: BTreeMap<String, Vec<f64>>,
}

impl TracedCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Central-difference direction vector at sample `k` (cyclic).
    pub fn direction(&self, k: usize) -> [f64; 4] {
        let n = self.samples.len();
        let prev = &self.samples[(k + n - 1) % n];
        let next = &self.samples[(k + 1) % n];
        [
            next.r - prev.r,
            wrap_unit(next.s - prev.s),
            next.x() - prev.x(),
            next.y() - prev.y(),
        ]
    }
}

fn wrap_unit(ds: f64) -> f64 {
    let mut d = ds;
    while d > 0.5 {
        d -= 1.0;
    }
    while d < -0.5 {
        d += 1.0;
    }
    d
}

/// The two attaching circles on the level `omega = -eps`:
/// `y = 0`, `r = cos(2 pi s)`, `x^2 + cos^2(2 pi s) = eps`, with
/// `s in (0, 1/2)` for the first circle and `s in (1/2, 1)` for the second.
pub fn attach_circles(eps: f64, samples: usize) -> Result<(TracedCurve, TracedCurve)> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::EpsRange(eps));
    }
    let n = samples.max(16);
    let build = |second: bool| {
        let mut pts = Vec::with_capacity(n);
        let mut etas = Vec::with_capacity(n);
        for k in 0..n {
            let psi = TWO_PI * k as f64 / n as f64;
            let c = eps.sqrt() * psi.cos();
            let x = eps.sqrt() * psi.sin();
            // 2 pi s = arccos(c) lies in (0, pi); the mirror circle lives
            // in the other half of the annulus
            let s0 = c.clamp(-1.0, 1.0).acos() / TWO_PI;
            let s = if second { 1.0 - s0 } else { s0 };
            let p = LocalPoint::a(c, s, Complex64::new(x, 0.0));
            etas.push(eta(&p));
            pts.push(p);
        }
        let mut metadata = BTreeMap::new();
        metadata.insert("eta".to_string(), etas);
        TracedCurve {
            samples: pts,
            closed: true,
            metadata,
        }
    };
    Ok((build(false), build(true)))
}

fn rk4_step(p: &LocalPoint, h: f64) -> Result<LocalPoint> {
    let advance = |q: &LocalPoint, k: &[f64; 4], f: f64| {
        LocalPoint::a(
            q.r + f * k[0],
            q.s + f * k[1],
            Complex64::new(q.x() + f * k[2], q.y() + f * k[3]),
        )
    };
    let k1 = vector_field_raw(p)?;
    let k2 = vector_field_raw(&advance(p, &k1, h / 2.0))?;
    let k3 = vector_field_raw(&advance(p, &k2, h / 2.0))?;
    let k4 = vector_field_raw(&advance(p, &k3, h))?;
    let mut out = *p;
    let combined = [
        (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0,
        (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0,
        (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]) / 6.0,
        (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]) / 6.0,
    ];
    out.r += h * combined[0];
    out.s += h * combined[1];
    out.z += Complex64::new(h * combined[2], h * combined[3]);
    Ok(out)
}

/// Integrates the raw field for signed time `duration` with `steps` RK4
/// steps.
pub fn flow_point(p: &LocalPoint, duration: f64, steps: usize) -> Result<LocalPoint> {
    if duration == 0.0 {
        return Ok(*p);
    }
    let n = steps.max(1);
    let h = duration / n as f64;
    let mut q = *p;
    for _ in 0..n {
        q = rk4_step(&q, h)?;
    }
    Ok(q)
}

/// Flows a point with Richardson step-halving until the endpoint is stable
/// within `tol`.
pub fn flow_point_refined(p: &LocalPoint, duration: f64, cfg: &NumericConfig) -> Result<LocalPoint> {
    let base_steps = ((duration.abs() / cfg.ode_step).ceil() as usize).max(4);
    let mut steps = base_steps;
    let mut prev = flow_point(p, duration, steps)?;
    for _ in 0..6 {
        steps *= 2;
        let cur = flow_point(p, duration, steps)?;
        let moved = cur.chart_dist(&prev);
        if moved < cfg.tol_geom / 10.0 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::OdeResidual {
        residual: f64::NAN,
        tol: cfg.tol_geom,
    })
}

/// Per-sample isotopy `H_t(p) = flow(p, -t eta(p))`, with verification
/// that `eta` decays linearly and `omega` is conserved.
pub fn isotopy_flow(curve: &TracedCurve, t: f64, cfg: &NumericConfig) -> Result<TracedCurve> {
    let mut samples = Vec::with_capacity(curve.samples.len());
    let mut etas = Vec::with_capacity(curve.samples.len());
    let mut max_eta_residual = 0.0f64;
    let mut max_omega_residual = 0.0f64;
    for p in &curve.samples {
        if (omega(p) + 0.5).abs() >= cfg.tol_geom {
            return Err(Error::OutsideFlowDomain);
        }
        let e0 = eta(p);
        let q = flow_point_refined(p, -t * e0, cfg)?;
        let expect = (1.0 - t) * e0;
        max_eta_residual = max_eta_residual.max((eta(&q) - expect).abs());
        max_omega_residual = max_omega_residual.max((omega(&q) - omega(p)).abs());
        etas.push(eta(&q));
        samples.push(q);
    }
    if max_eta_residual >= cfg.tol_geom || max_omega_residual >= cfg.tol_geom {
        return Err(Error::OdeResidual {
            residual: max_eta_residual.max(max_omega_residual),
            tol: cfg.tol_geom,
        });
    }
    let mut metadata = curve.metadata.clone();
    metadata.insert("eta".to_string(), etas);
    Ok(TracedCurve {
        samples,
        closed: curve.closed,
        metadata,
    })
}

/// Independence margin of two chart vectors: `sin` of the angle between
/// them, computed from the 2x2 minors of the pair so that structurally
/// parallel vectors give an exact zero.
pub fn independence_margin(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let mut wedge_sq = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let m = u[i] * v[j] - u[j] * v[i];
            wedge_sq += m * m;
        }
    }
    wedge_sq.sqrt() / (nu * nv)
}

/// Derivative identities and framing margins along an attaching circle.
#[derive(Debug, Clone)]
pub struct FramingReport {
    /// max |V(y) - x rho_z / (2 |z|^2)| over samples
    pub vy_identity_residual: f64,
    /// max |V(r - cos 2 pi s) - 2 rho_r sin(2 pi s)| over samples
    pub vr_identity_residual: f64,
    /// min margin between the curve direction and V (the field is nowhere
    /// tangent to the circle)
    pub min_margin_dir_v: f64,
    /// min margin between the curve direction and the attachment framing
    /// direction d/dy (d/dy is a valid framing of the circle)
    pub min_margin_dir_dy: f64,
    /// min margin between V and d/dy over all samples; vanishes exactly on
    /// the arc where the radial cutoff is zero, where V is proportional
    /// to d/dy
    pub min_margin_v_dy: f64,
    /// min margin between V and d/dy over samples with rho_r > 0
    pub min_margin_v_dy_on_radial_support: f64,
}

/// Checks the two derivative identities and the framing margins at the
/// samples of an attaching circle (`y = 0`, `r = cos 2 pi s` along it).
pub fn tangency_framing_check(curve: &TracedCurve, _cfg: &NumericConfig) -> Result<FramingReport> {
    let dy = [0.0, 0.0, 0.0, 1.0];
    let mut report = FramingReport {
        vy_identity_residual: 0.0,
        vr_identity_residual: 0.0,
        min_margin_dir_v: f64::INFINITY,
        min_margin_dir_dy: f64::INFINITY,
        min_margin_v_dy: f64::INFINITY,
        min_margin_v_dy_on_radial_support: f64::INFINITY,
    };
    for (k, p) in curve.samples.iter().enumerate() {
        let v = vector_field_raw(p)?;
        let z_abs = p.z.norm();
        let (rr, rz) = (rho_r(z_abs), rho_z(z_abs));

        // V(y) = x rho_z / (2 |z|^2); at z = 0 both sides vanish
        let vy = v[3];
        let rhs = if rz > 0.0 {
            p.x() * rz / (2.0 * p.z.norm_sqr())
        } else {
            0.0
        };
        report.vy_identity_residual = report.vy_identity_residual.max((vy - rhs).abs());

        // V(r - cos 2 pi s) = 2 rho_r sin(2 pi s) on the circle
        let grad = [1.0, TWO_PI * (TWO_PI * p.s).sin(), 0.0, 0.0];
        let lhs: f64 = v.iter().zip(&grad).map(|(a, b)| a * b).sum();
        let rhs = 2.0 * rr * (TWO_PI * p.s).sin();
        report.vr_identity_residual = report.vr_identity_residual.max((lhs - rhs).abs());

        let dir = curve.direction(k);
        report.min_margin_dir_v = report.min_margin_dir_v.min(independence_margin(&dir, &v));
        report.min_margin_dir_dy = report
            .min_margin_dir_dy
            .min(independence_margin(&dir, &dy));
        let m = independence_margin(&v, &dy);
        report.min_margin_v_dy = report.min_margin_v_dy.min(m);
        if rr > 0.0 {
            report.min_margin_v_dy_on_radial_support =
                report.min_margin_v_dy_on_radial_support.min(m);
        }
    }
    Ok(report)
}

/// Minimum direction/field independence margin along a (possibly flowed)
/// curve, the quantity that must stay positive for every flow time.
pub fn flow_tangency_margin(curve: &TracedCurve) -> Result<f64> {
    let mut min_margin = f64::INFINITY;
    for (k, p) in curve.samples.iter().enumerate() {
        let v = vector_field_raw(p)?;
        let dir = curve.direction(k);
        min_margin = min_margin.min(independence_margin(&dir, &v));
    }
    Ok(min_margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn field_examples() {
        // z = (1, 0), r chosen so omega = -1/2: r cos(2 pi s) = 1/2 - 1
        // at s = 1/2: -r = -1/2
        let p = LocalPoint::a(0.5, 0.5, Complex64::new(1.0, 0.0));
        assert!((omega(&p) + 0.5).abs() < 1e-15);
        let (v, d_omega, d_eta) = flow_field(&p, &cfg()).unwrap();
        assert!((v[0]).abs() < 1e-15 && (v[1]).abs() < 1e-15);
        assert!((v[2]).abs() < 1e-15);
        assert!((v[3] - 0.5).abs() < 1e-15);
        assert!(d_omega.abs() < 1e-6);
        assert!((d_eta - 1.0).abs() < 1e-6);

        // z = 0, s = 0, r = 1/2: pure radial part
        let p = LocalPoint::a(0.5, 0.0, Complex64::new(0.0, 0.0));
        let (v, d_omega, d_eta) = flow_field(&p, &cfg()).unwrap();
        assert!((v[0]).abs() < 1e-15);
        assert!((v[1] - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!(v[2] == 0.0 && v[3] == 0.0);
        assert!(d_omega.abs() < 1e-6);
        assert!((d_eta - 1.0).abs() < 1e-6);
    }

    #[test]
    fn attach_circle_geometry() {
        let (c1, c2) = attach_circles(0.01, 200).unwrap();
        for p in &c1.samples {
            // defining equation and level
            let lhs = p.x() * p.x() + (TWO_PI * p.s).cos().powi(2);
            assert!((lhs - 0.01).abs() < 1e-12);
            assert!((p.r - (TWO_PI * p.s).cos()).abs() < 1e-12);
            assert!(p.y().abs() < 1e-15);
            assert!((omega(p) + 0.01).abs() < 1e-12);
            assert!(p.s > 0.0 && p.s < 0.5);
        }
        for p in &c2.samples {
            assert!(p.s > 0.5 && p.s < 1.0);
        }
        // disjoint point sets
        let mut min_dist = f64::INFINITY;
        for p in &c1.samples {
            for q in &c2.samples {
                min_dist = min_dist.min(p.chart_dist(q));
            }
        }
        assert!(min_dist > 0.1);
    }

    #[test]
    fn eta_level_counts() {
        let eps = 0.01f64;
        let (c1, _) = attach_circles(eps, 400).unwrap();
        let bound = (eps * (1.0 - eps)).sqrt();
        let crossings = |u: f64| -> usize {
            let e = &c1.metadata["eta"];
            let n = e.len();
            (0..n)
                .filter(|&k| {
                    let a = e[k] - u;
                    let b = e[(k + 1) % n] - u;
                    a <= 0.0 && b > 0.0 || a > 0.0 && b <= 0.0
                })
                .count()
        };
        assert_eq!(crossings(0.5 * bound), 2);
        assert_eq!(crossings(-0.5 * bound), 2);
        assert_eq!(crossings(1.5 * bound), 0);
        assert_eq!(crossings(-1.5 * bound), 0);
        // at the extreme level the curve is tangent: nearby levels
        // bracket a single extremum
        let emax = c1.metadata["eta"].iter().cloned().fold(f64::MIN, f64::max);
        assert!((emax - bound).abs() < 1e-4);
    }

    #[test]
    fn isotopy_decays_eta() {
        let cfg = cfg();
        let (c1, _) = attach_circles(0.5, 64).unwrap();
        for &t in &[0.25, 0.5, 0.75, 1.0] {
            let moved = isotopy_flow(&c1, t, &cfg).unwrap();
            for (k, p) in moved.samples.iter().enumerate() {
                let e0 = c1.metadata["eta"][k];
                assert!((eta(p) - (1.0 - t) * e0).abs() < 1e-6);
                assert!((omega(p) + 0.5).abs() < 1e-6);
            }
        }
        // eta(p) = 0 samples are fixed
        let moved = isotopy_flow(&c1, 1.0, &cfg).unwrap();
        for (k, p) in c1.samples.iter().enumerate() {
            if c1.metadata["eta"][k].abs() < 1e-14 {
                assert!(p.chart_dist(&moved.samples[k]) < 1e-9);
            }
        }
    }

    #[test]
    fn time_one_lands_in_the_reference_fiber() {
        let cfg = cfg();
        let (c1, c2) = attach_circles(0.5, 64).unwrap();
        for c in [&c1, &c2] {
            let moved = isotopy_flow(c, 1.0, &cfg).unwrap();
            for p in &moved.samples {
                let fa = Complex64::from_polar(p.r, TWO_PI * p.s) + p.z * p.z;
                assert!((fa - Complex64::new(0.5, 0.0)).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn framing_margins() {
        let cfg = cfg();
        let (c1, _) = attach_circles(0.5, 256).unwrap();
        let report = tangency_framing_check(&c1, &cfg).unwrap();
        assert!(report.vy_identity_residual < 1e-12);
        assert!(report.vr_identity_residual < 1e-12);
        assert!(report.min_margin_dir_v > 0.0);
        assert!(report.min_margin_dir_dy > 0.0);
        assert!(report.min_margin_v_dy_on_radial_support > 0.0);
        // where the radial cutoff vanishes the field is a multiple of
        // d/dy along the circle, so the global margin collapses
        assert_eq!(report.min_margin_v_dy, 0.0);

        // on a small circle the fiber coordinate never leaves the radial
        // plateau and the global margin is positive
        let (small, _) = attach_circles(0.005, 256).unwrap();
        let report = tangency_framing_check(&small, &cfg).unwrap();
        assert!(report.min_margin_v_dy > 0.0);
    }
}
