//! The reference regular fiber `Fa^-1(1/2)` as a branched double cover of
//! the annulus, reference cycles on it, and polygonal intersection counts
//! for sampled curves.
//!
//! Away from the two branch points `(1/2, 0)` and `(-1/2, 1/2)` the fiber
//! coordinate `z` together with the sheet sign `sign(r)` is a chart; the
//! `z`-chart is positively oriented on the `r > 0` sheet and negatively
//! oriented on the `r < 0` sheet. Intersection numbers are signed segment
//! crossings in the `z`-plane, matched on the surface by comparing annulus
//! positions, with vertex crossings (the branch points, which the flowed
//! attaching circles hit exactly) resolved from neighboring samples.

use num_complex::Complex64;

use super::charts::LocalPoint;
use super::config::NumericConfig;
use super::flow::{attach_circles, eta, isotopy_flow, omega, TracedCurve};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Reference regular value for fiber tracing.
pub const W_REF: f64 = 0.5;

/// Branch points of the annulus projection of `Fa^-1(1/2)`.
pub fn fiber_branch_points() -> [LocalPoint; 2] {
    [
        LocalPoint::a(0.5, 0.0, Complex64::new(0.0, 0.0)),
        LocalPoint::a(-0.5, 0.5, Complex64::new(0.0, 0.0)),
    ]
}

fn fa(p: &LocalPoint) -> Complex64 {
    Complex64::from_polar(p.r, TWO_PI * p.s) + p.z * p.z
}

/// Residual of a curve against the reference fiber.
pub fn max_fiber_residual(curve: &TracedCurve) -> f64 {
    curve
        .samples
        .iter()
        .map(|p| (fa(p) - Complex64::new(W_REF, 0.0)).norm())
        .fold(0.0, f64::max)
}

/// The annulus-core lift: the closed curve over the circle `r = delta`
/// on the principal square-root sheet.
pub fn core_reference(samples: usize) -> TracedCurve {
    let delta = 0.07;
    let n = samples.max(64);
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        let s = k as f64 / n as f64;
        let gamma = Complex64::from_polar(delta, TWO_PI * s);
        let z = (Complex64::new(W_REF, 0.0) - gamma).sqrt();
        pts.push(LocalPoint::a(delta, s, z));
    }
    TracedCurve {
        samples: pts,
        closed: true,
        metadata: Default::default(),
    }
}

/// The branch-cut lift: the closed curve over an arc joining the two
/// branch points (through the `s in (0, 1/2)` band, approaching both
/// endpoints from the side where the lift is imaginary), traversed out on
/// one square-root branch and back on the other.
pub fn cut_reference(samples: usize) -> TracedCurve {
    let n = samples.max(96);
    // annulus path in three segments, ending exactly at the branch points
    let path = |tau: f64| -> (f64, f64) {
        if tau < 0.2 {
            let t = tau / 0.2;
            // straight out past the first branch point
            (0.5 + 0.32 * t, 0.0)
        } else if tau < 0.8 {
            let t = (tau - 0.2) / 0.6;
            (
                0.82 * (std::f64::consts::PI * t).cos()
                    - 0.30 * (std::f64::consts::PI * t).sin(),
                t / 2.0,
            )
        } else {
            let t = (tau - 0.8) / 0.2;
            (-0.82 + 0.32 * t, 0.5)
        }
    };
    let mut fwd: Vec<LocalPoint> = Vec::with_capacity(n + 1);
    let mut z_prev = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let tau = k as f64 / n as f64;
        let (r, s) = path(tau);
        let gamma = Complex64::from_polar(r, TWO_PI * s);
        let target = Complex64::new(W_REF, 0.0) - gamma;
        let root = target.sqrt();
        let z = if k == 0 {
            // leave the first branch point along +i
            if root.im >= 0.0 {
                root
            } else {
                -root
            }
        } else if (root - z_prev).norm() <= (root + z_prev).norm() {
            root
        } else {
            -root
        };
        z_prev = z;
        fwd.push(LocalPoint::a(r, s, z));
    }
    // endpoints are the branch points: force exact zeroes there
    fwd.first_mut().unwrap().z = Complex64::new(0.0, 0.0);
    fwd.last_mut().unwrap().z = Complex64::new(0.0, 0.0);

    let mut pts = fwd.clone();
    for p in fwd.iter().rev().skip(1).take(n - 1) {
        let mut q = *p;
        q.z = -q.z;
        pts.push(q);
    }
    TracedCurve {
        samples: pts,
        closed: true,
        metadata: Default::default(),
    }
}

/// A closed curve far out toward one end of the fiber, parallel to the
/// boundary; its class pairs to zero with everything compact.
pub fn end_parallel_reference(samples: usize) -> TracedCurve {
    let big = 1.5f64;
    let n = samples.max(64);
    let mut pts = Vec::with_capacity(n);
    let mut s_prev = 0.0f64;
    for k in 0..n {
        let phi = TWO_PI * k as f64 / n as f64;
        let z = Complex64::from_polar(big, phi);
        let gamma = Complex64::new(W_REF, 0.0) - z * z;
        let r = gamma.norm();
        // unwrap the angular coordinate continuously; it advances by two
        // full turns as phi advances by one
        let mut s = gamma.arg() / TWO_PI;
        while s < s_prev - 0.5 {
            s += 1.0;
        }
        while s > s_prev + 0.5 {
            s -= 1.0;
        }
        s_prev = s;
        pts.push(LocalPoint::a(r, s, z));
    }
    TracedCurve {
        samples: pts,
        closed: true,
        metadata: Default::default(),
    }
}

fn wrap_half(d: f64) -> f64 {
    let mut d = d % 1.0;
    if d > 0.5 {
        d -= 1.0;
    }
    if d < -0.5 {
        d += 1.0;
    }
    d
}

/// Annulus distance between `(r, s)` positions of two points.
fn annulus_dist(p: &LocalPoint, q: &LocalPoint) -> f64 {
    ((p.r - q.r).powi(2) + wrap_half(p.s - q.s).powi(2)).sqrt()
}

/// The other fiber point over the same `z`: `[r, s]_a -> [-r, s + 1/2]_a`.
fn other_sheet(p: &LocalPoint) -> LocalPoint {
    LocalPoint::a(-p.r, p.s + 0.5, p.z)
}

fn cross2(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn lerp_point(p: &LocalPoint, q: &LocalPoint, t: f64) -> LocalPoint {
    LocalPoint::a(
        p.r + t * (q.r - p.r),
        p.s + t * wrap_half(q.s - p.s),
        p.z + t * (q.z - p.z),
    )
}

/// Signed intersection number of two closed sampled curves on the fiber.
///
/// Generic crossings are detected as strict-interior segment crossings in
/// the `z`-plane whose annulus positions agree (closer than to the other
/// sheet); shared vertices (branch-point passes) are resolved from
/// neighboring samples and must be transverse.
pub fn intersection_number(a: &TracedCurve, b: &TracedCurve) -> Result<i64> {
    let na = a.samples.len();
    let nb = b.samples.len();
    let mut total = 0i64;
    let mut vertex_hits: Vec<LocalPoint> = Vec::new();
    let seen = |hits: &[LocalPoint], p: &LocalPoint| {
        hits.iter()
            .any(|v| (v.z - p.z).norm() < 1e-6 && annulus_dist(v, p) < 1e-3)
    };

    // vertex crossings: sample-to-sample coincidences
    for (i, p) in a.samples.iter().enumerate() {
        for (j, q) in b.samples.iter().enumerate() {
            if (p.z - q.z).norm() < 1e-9
                && annulus_dist(p, q) < annulus_dist(&other_sheet(p), q)
                && !seen(&vertex_hits, p)
            {
                let da = a.samples[(i + 1) % na].z - a.samples[(i + na - 1) % na].z;
                let db = b.samples[(j + 1) % nb].z - b.samples[(j + nb - 1) % nb].z;
                let wedge = cross2(da, db);
                if wedge.abs() < 0.05 * da.norm() * db.norm() {
                    return Err(Error::AmbiguousIntersection { index: i });
                }
                let sheet = if p.r + q.r >= 0.0 { 1 } else { -1 };
                total += sheet * wedge.signum() as i64;
                vertex_hits.push(*p);
            }
        }
    }

    // generic segment crossings
    for i in 0..na {
        let a1 = &a.samples[i];
        let a2 = &a.samples[(i + 1) % na];
        let d1 = a2.z - a1.z;
        for j in 0..nb {
            let b1 = &b.samples[j];
            let b2 = &b.samples[(j + 1) % nb];
            let d2 = b2.z - b1.z;
            let denom = cross2(d1, d2);
            if denom.abs() < 1e-15 {
                continue;
            }
            let rhs = b1.z - a1.z;
            let t = cross2(rhs, d2) / denom;
            let u = cross2(rhs, d1) / denom;
            let interior = 1e-9..(1.0 - 1e-9);
            if !interior.contains(&t) || !interior.contains(&u) {
                continue;
            }
            let pa = lerp_point(a1, a2, t);
            let pb = lerp_point(b1, b2, u);
            if annulus_dist(&pa, &pb) >= annulus_dist(&other_sheet(&pa), &pb) {
                continue;
            }
            // skip crossings already booked as vertex hits
            if seen(&vertex_hits, &pa) {
                continue;
            }
            let sheet = if pa.r + pb.r >= 0.0 { 1 } else { -1 };
            total += sheet * denom.signum() as i64;
        }
    }
    Ok(total)
}

/// Signed intersection counts of a traced curve against the two reference
/// cycles `(annulus-core lift, branch-cut lift)`.
pub fn attaching_class(curve: &TracedCurve, cfg: &NumericConfig) -> Result<(i64, i64)> {
    let n = (cfg.grid * 64).max(512);
    let core = core_reference(n);
    let cut = cut_reference(n);
    Ok((
        intersection_number(curve, &core)?,
        intersection_number(curve, &cut)?,
    ))
}

/// Builds the two isotoped attaching circles inside the reference fiber.
pub fn flowed_attach_circles(cfg: &NumericConfig, samples: usize) -> Result<(TracedCurve, TracedCurve)> {
    let (c1, c2) = attach_circles(0.5, samples)?;
    Ok((isotopy_flow(&c1, 1.0, cfg)?, isotopy_flow(&c2, 1.0, cfg)?))
}

/// Winding data of the annulus projection of one curve around the two
/// branch points.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingRecord {
    /// number of pass-throughs (collision runs) at each branch point
    pub passes: [usize; 2],
    /// net winding of the projection around each branch point, with
    /// colliding runs excised
    pub winding: [f64; 2],
    /// the half-annulus band spanned by the non-colliding samples
    pub s_range: (f64, f64),
}

/// Projects curves to the annulus and reports winding numbers around the
/// two branch points. Samples passing within `10 * tol_geom` of a branch
/// point are treated as pass-throughs and excised from the angle sum.
pub fn project_and_wind(curves: &[&TracedCurve], cfg: &NumericConfig) -> Result<Vec<WindingRecord>> {
    let branch = fiber_branch_points();
    let collision_radius = 10.0 * cfg.tol_geom;
    let mut records = Vec::with_capacity(curves.len());
    for curve in curves {
        let n = curve.samples.len();
        let mut passes = [0usize; 2];
        let mut winding = [0.0f64; 2];
        let mut s_min = f64::INFINITY;
        let mut s_max = f64::NEG_INFINITY;
        for (bi, b) in branch.iter().enumerate() {
            let colliding: Vec<bool> = curve
                .samples
                .iter()
                .map(|p| annulus_dist(p, b) < collision_radius)
                .collect();
            // count maximal colliding runs (cyclically)
            let mut runs = 0usize;
            for k in 0..n {
                if colliding[k] && !colliding[(k + n - 1) % n] {
                    runs += 1;
                }
            }
            if colliding.iter().all(|&c| c) {
                return Err(Error::BranchCollision {
                    index: 0,
                    dist: 0.0,
                });
            }
            passes[bi] = runs;
            let mut angle = 0.0f64;
            for k in 0..n {
                let k1 = (k + 1) % n;
                if colliding[k] || colliding[k1] {
                    continue;
                }
                let v0 = (
                    curve.samples[k].r - b.r,
                    wrap_half(curve.samples[k].s - b.s),
                );
                let v1 = (
                    curve.samples[k1].r - b.r,
                    wrap_half(curve.samples[k1].s - b.s),
                );
                let cross = v0.0 * v1.1 - v0.1 * v1.0;
                let dot = v0.0 * v1.0 + v0.1 * v1.1;
                angle += cross.atan2(dot);
            }
            winding[bi] = angle / TWO_PI;
        }
        for p in &curve.samples {
            let near_branch = branch
                .iter()
                .any(|b| annulus_dist(p, b) < collision_radius);
            if !near_branch {
                let s = p.normalized().s;
                s_min = s_min.min(s);
                s_max = s_max.max(s);
            }
        }
        records.push(WindingRecord {
            passes,
            winding,
            s_range: (s_min, s_max),
        });
    }
    Ok(records)
}

/// Flows one point with `|z|` inside the radial support and checks that
/// the real part of the projected position `Gamma(alpha(p)) = r e^(2 pi i s)`
/// stays constant, while the imaginary part moves.
pub fn radial_trajectory_real_part_drift(cfg: &NumericConfig) -> Result<f64> {
    let p = LocalPoint::a(0.52, 0.03, Complex64::new(0.05, 0.02));
    // adjust r so the point lies on the level set
    let c = (TWO_PI * p.s).cos();
    let r = (0.5 - p.x() * p.x() + p.y() * p.y()) / c;
    let p = LocalPoint::a(r, p.s, p.z);
    debug_assert!((omega(&p) + 0.5).abs() < 1e-12);
    let re0 = p.r * (TWO_PI * p.s).cos();
    let mut drift = 0.0f64;
    let duration = -eta(&p);
    for k in 1..=8 {
        let q = super::flow::flow_point_refined(&p, duration * k as f64 / 8.0, cfg)?;
        let re = q.r * (TWO_PI * q.s).cos();
        drift = drift.max((re - re0).abs());
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn reference_cycles_live_on_the_fiber() {
        for c in [core_reference(256), cut_reference(256), end_parallel_reference(256)] {
            assert!(max_fiber_residual(&c) < 1e-12);
        }
    }

    #[test]
    fn core_and_cut_are_dual() {
        let core = core_reference(512);
        let cut = cut_reference(512);
        let n = intersection_number(&cut, &core).unwrap();
        assert_eq!(n.abs(), 1, "cut x core = {n}");
    }

    #[test]
    fn end_parallel_class_vanishes() {
        let cfg = cfg();
        let end = end_parallel_reference(512);
        let (a, b) = attaching_class(&end, &cfg).unwrap();
        assert_eq!((a, b), (0, 0));
    }

    #[test]
    fn small_circle_winding() {
        let cfg = cfg();
        // a small loop around the first branch point, on the fiber
        let mut pts = Vec::new();
        let n = 128;
        for k in 0..n {
            let phi = TWO_PI * k as f64 / n as f64;
            let gamma = Complex64::new(W_REF, 0.0) + Complex64::from_polar(0.05, phi);
            let z = (Complex64::new(W_REF, 0.0) - gamma).sqrt();
            pts.push(LocalPoint::a(gamma.norm(), gamma.arg() / TWO_PI, z));
        }
        let curve = TracedCurve {
            samples: pts,
            closed: true,
            metadata: Default::default(),
        };
        let records = project_and_wind(&[&curve], &cfg).unwrap();
        assert_eq!(records[0].passes, [0, 0]);
        assert!((records[0].winding[0].abs() - 1.0).abs() < 1e-6);
        assert!(records[0].winding[1].abs() < 1e-6);
    }
}
