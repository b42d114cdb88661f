//! Smooth cutoff profiles: the twist profile used by the local monodromy
//! model and the partition of unity for the level-set vector field.

use crate::{Error, Result};

/// Quintic smoothstep on `[0, 1]`: C^2, monotone, 0 at 0 and 1 at 1.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

/// Monotone non-increasing C^2 profile: 1 on `[0, inner]`, 0 on
/// `[outer, oo)`, quintic ramp in between. Defaults to the twist profile
/// with plateau radii 4/3 and 5/3.
#[derive(Debug, Clone, Copy)]
pub struct BumpProfile {
    pub inner: f64,
    pub outer: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        BumpProfile {
            inner: 4.0 / 3.0,
            outer: 5.0 / 3.0,
        }
    }
}

impl BumpProfile {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(0.0 < inner && inner < outer) {
            return Err(Error::EpsRange(inner));
        }
        Ok(BumpProfile { inner, outer })
    }

    pub fn value(&self, radius: f64) -> f64 {
        1.0 - smoothstep((radius - self.inner) / (self.outer - self.inner))
    }
}

/// Partition of unity on the level set, subordinate to
/// `{z != 0}` and a neighborhood of `z = 0`: `rho_r = 1` for `|z| <= 0.1`,
/// `rho_r = 0` for `|z| >= 0.2`, and `rho_z = 1 - rho_r`.
pub const RHO_R_INNER: f64 = 0.1;
pub const RHO_R_OUTER: f64 = 0.2;

pub fn rho_r(z_abs: f64) -> f64 {
    1.0 - smoothstep((z_abs - RHO_R_INNER) / (RHO_R_OUTER - RHO_R_INNER))
}

pub fn rho_z(z_abs: f64) -> f64 {
    1.0 - rho_r(z_abs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_plateaus_and_monotonicity() {
        let p = BumpProfile::default();
        assert_eq!(p.value(0.0), 1.0);
        assert_eq!(p.value(4.0 / 3.0), 1.0);
        assert_eq!(p.value(5.0 / 3.0), 0.0);
        assert_eq!(p.value(9.0), 0.0);
        let mut prev = 1.0;
        for k in 0..=1000 {
            let v = p.value(2.0 * k as f64 / 1000.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn partition_sums_to_one() {
        for k in 0..=100 {
            let t = 0.3 * k as f64 / 100.0;
            assert!((rho_r(t) + rho_z(t) - 1.0).abs() < 1e-15);
        }
        assert_eq!(rho_r(0.05), 1.0);
        assert_eq!(rho_r(0.25), 0.0);
    }

    #[test]
    fn smoothstep_is_c2_at_ends() {
        // second differences vanish at the ends at O(h)
        let h = 1e-4;
        for t0 in [0.0, 1.0] {
            let dd = (smoothstep(t0 - h) - 2.0 * smoothstep(t0) + smoothstep(t0 + h)) / (h * h);
            assert!(dd.abs() < 1e-2, "dd = {dd}");
        }
    }
}
