//! Chart coordinates on the open Moebius band `M` and the open annulus `A`.
//!
//! Both are quotients of the `(r, s)`-plane: on `M` the deck action is
//! `(r, s) -> (-r, s + 1)`, on `A` it is `(r, s) -> (r, s + 1)`. Points
//! carry a complex fiber coordinate `z = x + iy`; evaluation must be
//! invariant under the identification.

use num_complex::Complex64;

/// Which quotient the `(r, s)` coordinates live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    M,
    A,
}

/// A point of `M x C` or `A x C` in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPoint {
    pub chart: Chart,
    pub r: f64,
    pub s: f64,
    pub z: Complex64,
}

impl LocalPoint {
    pub fn new(chart: Chart, r: f64, s: f64, z: Complex64) -> Self {
        LocalPoint { chart, r, s, z }
    }

    pub fn m(r: f64, s: f64, z: Complex64) -> Self {
        Self::new(Chart::M, r, s, z)
    }

    pub fn a(r: f64, s: f64, z: Complex64) -> Self {
        Self::new(Chart::A, r, s, z)
    }

    pub fn x(&self) -> f64 {
        self.z.re
    }

    pub fn y(&self) -> f64 {
        self.z.im
    }

    /// Normal form with `s` in `[0, 1)`; on the Moebius chart the sign of
    /// `r` flips once per unit shift.
    pub fn normalized(&self) -> LocalPoint {
        let n = self.s.floor();
        let s = self.s - n;
        let r = match self.chart {
            Chart::A => self.r,
            Chart::M => {
                if (n as i64).rem_euclid(2) == 0 {
                    self.r
                } else {
                    -self.r
                }
            }
        };
        LocalPoint {
            chart: self.chart,
            r,
            s,
            z: self.z,
        }
    }

    /// Distance in chart coordinates, minimized over the identification.
    pub fn chart_dist(&self, other: &LocalPoint) -> f64 {
        assert_eq!(self.chart, other.chart);
        let p = self.normalized();
        let q = other.normalized();
        let dz = (p.z - q.z).norm();
        let mut best = f64::INFINITY;
        for n in [-1i64, 0, 1] {
            let (rq, sq) = match self.chart {
                Chart::A => (q.r, q.s + n as f64),
                Chart::M => {
                    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    (sign * q.r, q.s + n as f64)
                }
            };
            let d = ((p.r - rq).powi(2) + (p.s - sq).powi(2)).sqrt();
            best = best.min(d);
        }
        best + dz
    }

    /// The annulus-to-Moebius double covering `[r, s]_a -> [r, 2s]_m`.
    pub fn project_to_m(&self) -> LocalPoint {
        assert_eq!(self.chart, Chart::A);
        LocalPoint::m(self.r, 2.0 * self.s, self.z)
    }
}

/// Position in the annulus chart alone (no fiber coordinate).
pub fn a_point(r: f64, s: f64) -> LocalPoint {
    LocalPoint::a(r, s, Complex64::new(0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_identification() {
        let p = LocalPoint::m(0.7, 1.25, Complex64::new(0.1, -0.2));
        let q = LocalPoint::m(-0.7, 0.25, Complex64::new(0.1, -0.2));
        assert!(p.chart_dist(&q) < 1e-14);
        let r = LocalPoint::m(0.7, 0.25, Complex64::new(0.1, -0.2));
        assert!(p.chart_dist(&r) > 1.0);
    }

    #[test]
    fn annulus_identification() {
        let p = LocalPoint::a(0.7, 2.25, Complex64::new(0.0, 0.0));
        let q = LocalPoint::a(0.7, 0.25, Complex64::new(0.0, 0.0));
        assert!(p.chart_dist(&q) < 1e-14);
    }

    #[test]
    fn covering_projection() {
        let p = LocalPoint::a(0.5, 0.75, Complex64::new(0.0, 0.0));
        let m = p.project_to_m();
        // [r, s+1]_a covers [(–1)^2 r, 2s+2]_m = same point
        let shifted = LocalPoint::a(0.5, 1.75, Complex64::new(0.0, 0.0)).project_to_m();
        assert!(m.chart_dist(&shifted) < 1e-14);
    }
}
