//! Monodromy transport around the critical value of the unperturbed local
//! model: the loop `t -> exp(2 pi i t)` in the base lifts to a bundle
//! trivialization whose time-1 map is the local crosscap transposition.
//!
//! The angular coordinate is transported by the quadrature
//! `s~(t) = s + (1/pi) Int Im((dw/dt) / w) dt` with
//! `w(t, z) = exp(2 pi i t) - exp(2 pi i rho'(|z|) t) z^2`, the radial
//! coordinate by `|w|` with the sign of the starting sheet, and the fiber
//! coordinate by `z -> exp(i pi rho'(|z|) t) z`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::charts::LocalPoint;
use super::config::NumericConfig;
use super::models::{eval_local_model, LocalModel};
use super::profile::BumpProfile;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// `w(t, z)`; vanishes identically in `t` exactly at `z = +/-1`.
pub fn w_loop(profile: &BumpProfile, t: f64, z: Complex64) -> Complex64 {
    let rho = profile.value(z.norm());
    Complex64::new(0.0, TWO_PI * t).exp()
        - Complex64::new(0.0, TWO_PI * rho * t).exp() * z * z
}

fn dw_dt(profile: &BumpProfile, t: f64, z: Complex64) -> Complex64 {
    let rho = profile.value(z.norm());
    let i = Complex64::new(0.0, 1.0);
    i * TWO_PI * Complex64::new(0.0, TWO_PI * t).exp()
        - i * TWO_PI * rho * Complex64::new(0.0, TWO_PI * rho * t).exp() * z * z
}

fn integrand(profile: &BumpProfile, t: f64, z: Complex64) -> f64 {
    let w = w_loop(profile, t, z);
    (dw_dt(profile, t, z) / w).im / PI
}

/// Transported angular coordinate `s~(t_end, s, z)` by adaptive composite
/// Simpson quadrature with panel doubling.
pub fn s_tilde(
    profile: &BumpProfile,
    t_end: f64,
    s: f64,
    z: Complex64,
    cfg: &NumericConfig,
) -> Result<f64> {
    if (z - Complex64::new(1.0, 0.0)).norm() < 1e-9
        || (z + Complex64::new(1.0, 0.0)).norm() < 1e-9
    {
        return Err(Error::QuadratureDiverged { z, delta: f64::NAN });
    }
    let f = |t: f64| integrand(profile, t, z);
    let mut n = cfg.quadrature_points.max(8);
    let mut prev = simpson(&f, t_end, n);
    loop {
        n *= 2;
        let cur = simpson(&f, t_end, n);
        let delta = (cur - prev).abs();
        if delta < 1e-11 {
            return Ok(s + cur);
        }
        if n > (1 << 22) {
            return Err(Error::QuadratureDiverged { z, delta });
        }
        prev = cur;
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, t_end: f64, panels: usize) -> f64 {
    let n = panels.max(2) & !1usize;
    let h = t_end / n as f64;
    let mut acc = f(0.0) + f(t_end);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(k as f64 * h);
    }
    acc * h / 3.0
}

/// Winding of the closed loop `t -> w(t, z)` around the origin by
/// continuous argument tracking; an independent oracle for the quadrature
/// (`s~(1) - s = 2 * winding`).
pub fn winding_oracle(profile: &BumpProfile, z: Complex64, steps: usize) -> f64 {
    let n = steps.max(64);
    let mut total = 0.0f64;
    let mut prev = w_loop(profile, 0.0, z);
    for k in 1..=n {
        let t = k as f64 / n as f64;
        let cur = w_loop(profile, t, z);
        total += (cur / prev).arg();
        prev = cur;
    }
    total / TWO_PI
}

/// Transported radial coordinate: unchanged on the inner plateau, signed
/// `|w|` outside.
pub fn r_tilde(profile: &BumpProfile, t: f64, r: f64, z: Complex64) -> f64 {
    if z.norm() < profile.inner {
        r
    } else {
        let mag = w_loop(profile, t, z).norm();
        if r >= 0.0 {
            mag
        } else {
            -mag
        }
    }
}

/// The unique fiber point of `Fm^-1(w)` over a fiber coordinate `z` away
/// from the square roots of `w`.
pub fn fiber_point_m(w: Complex64, z: Complex64) -> LocalPoint {
    let zeta = w - z * z;
    LocalPoint::m(zeta.norm(), zeta.arg() / PI, z).normalized()
}

/// Time-`t` transport of a fiber point of `Fm^-1(1)`.
pub fn lambda_t(
    profile: &BumpProfile,
    p: &LocalPoint,
    t: f64,
    cfg: &NumericConfig,
) -> Result<LocalPoint> {
    let rho = profile.value(p.z.norm());
    let s_new = s_tilde(profile, t, p.s, p.z, cfg)?;
    let r_new = r_tilde(profile, t, p.r, p.z);
    let z_new = Complex64::new(0.0, PI * rho * t).exp() * p.z;
    Ok(LocalPoint::m(r_new, s_new, z_new))
}

/// Per-check maxima from a transport run.
#[derive(Debug, Clone, Default)]
pub struct TransportReport {
    /// max |s~(1,s,z) - (s+2)| over plateau samples (|z| <= inner radius)
    pub plateau_shift_residual: f64,
    /// max chart distance between the time-1 map and the model twist
    /// `z -> exp(i pi rho'(|z|)) z` over all samples
    pub twist_match_residual: f64,
    /// max chart distance between the time-1 map and the identity over
    /// samples with |z| >= outer radius
    pub fixed_outside_residual: f64,
    /// max |Fm(Lambda_t(p)) - exp(2 pi i t)| over samples and t
    pub trivialization_residual: f64,
    /// max |quadrature - winding oracle| over samples with |z| outside
    /// [0.9, 1.1]
    pub winding_agreement_residual: f64,
    pub samples: usize,
}

/// Runs the transport checks on circles of fiber-coordinate samples.
pub fn monodromy_transport(cfg: &NumericConfig) -> Result<TransportReport> {
    cfg.validate()?;
    let profile = BumpProfile::default();
    let w_ref = Complex64::new(1.0, 0.0);
    let radii = [0.25, 0.6, 0.95, 1.05, 1.2, 1.3, 1.45, 1.55, 1.7, 1.9];
    let angular = cfg.grid.max(12);
    let mut report = TransportReport::default();

    for &rad in &radii {
        for k in 0..angular {
            // offset keeps samples away from the singular points z = +/-1
            let phi = TWO_PI * (k as f64 + 0.37) / angular as f64;
            let z = Complex64::from_polar(rad, phi);
            let p = fiber_point_m(w_ref, z);
            report.samples += 1;

            let s1 = s_tilde(&profile, 1.0, p.s, z, cfg)?;
            if rad <= profile.inner {
                report.plateau_shift_residual = report
                    .plateau_shift_residual
                    .max((s1 - (p.s + 2.0)).abs());
            }

            for &t in &[0.25, 0.5, 0.75, 1.0] {
                let moved = lambda_t(&profile, &p, t, cfg)?;
                let val = eval_local_model(LocalModel::Fm, &moved)?;
                let target = Complex64::new(0.0, TWO_PI * t).exp();
                report.trivialization_residual = report
                    .trivialization_residual
                    .max((val - target).norm());
            }

            let moved = lambda_t(&profile, &p, 1.0, cfg)?;
            let z_model = Complex64::new(0.0, PI * profile.value(rad)).exp() * z;
            let model_point = fiber_point_m(w_ref, z_model);
            report.twist_match_residual = report
                .twist_match_residual
                .max(moved.chart_dist(&model_point));

            if rad >= profile.outer {
                report.fixed_outside_residual =
                    report.fixed_outside_residual.max(moved.chart_dist(&p));
            }

            if !(0.9..=1.1).contains(&rad) {
                let oracle = 2.0 * winding_oracle(&profile, z, 4096);
                report.winding_agreement_residual = report
                    .winding_agreement_residual
                    .max((s1 - p.s - oracle).abs());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn plateau_angular_shift_is_two() {
        let profile = BumpProfile::default();
        let s1 = s_tilde(&profile, 1.0, 0.0, Complex64::new(0.0, 0.0), &cfg()).unwrap();
        assert!((s1 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn outside_samples_do_not_wind() {
        let profile = BumpProfile::default();
        let z = Complex64::new(1.8, 0.0);
        let s1 = s_tilde(&profile, 1.0, 0.25, z, &cfg()).unwrap();
        assert!((s1 - 0.25).abs() < 1e-8);
        assert!(winding_oracle(&profile, z, 4096).abs() < 1e-9);
    }

    #[test]
    fn plateau_twist_rotates_by_pi() {
        // |z| = 1.2 is inside the plateau, so the fiber coordinate is
        // rotated by exp(i pi)
        let profile = BumpProfile::default();
        let z = Complex64::new(1.2, 0.0);
        let p = fiber_point_m(Complex64::new(1.0, 0.0), z);
        let moved = lambda_t(&profile, &p, 1.0, &cfg()).unwrap();
        assert!((moved.z - Complex64::new(-1.2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quadrature_rejects_singular_fiber_coordinates() {
        let profile = BumpProfile::default();
        let err = s_tilde(&profile, 1.0, 0.0, Complex64::new(1.0, 0.0), &cfg());
        assert!(err.is_err());
    }

    #[test]
    fn full_transport_report() {
        let report = monodromy_transport(&cfg()).unwrap();
        assert!(report.plateau_shift_residual < 1e-8);
        assert!(report.twist_match_residual < 1e-6);
        assert!(report.fixed_outside_residual < 1e-6);
        assert!(report.trivialization_residual < 1e-6);
        assert!(report.winding_agreement_residual < 1e-8);
    }
}
