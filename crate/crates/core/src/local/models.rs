//! The explicit local models and their evaluation.
//!
//! * `Fm([r,s]_m, z) = r exp(i pi s) + z^2` on the Moebius chart;
//! * `Fa([r,s]_a, z) = r exp(2 pi i s) + z^2` on the annulus chart;
//! * `Feps([r,s]_m, z) = Fm + eps exp(4 pi i s)`, the stable perturbation.

use num_complex::Complex64;

use super::charts::{Chart, LocalPoint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalModel {
    Fm,
    Fa,
    Feps { eps: f64 },
}

impl LocalModel {
    pub fn chart(&self) -> Chart {
        match self {
            LocalModel::Fa => Chart::A,
            _ => Chart::M,
        }
    }
}

/// A smooth map out of a chart, for generic critical scans.
pub trait ChartMap {
    fn chart(&self) -> Chart;
    fn eval_raw(&self, r: f64, s: f64, z: Complex64) -> Complex64;
}

impl ChartMap for LocalModel {
    fn chart(&self) -> Chart {
        LocalModel::chart(self)
    }

    fn eval_raw(&self, r: f64, s: f64, z: Complex64) -> Complex64 {
        match self {
            LocalModel::Fm => Complex64::from_polar(r, std::f64::consts::PI * s) + z * z,
            LocalModel::Fa => {
                Complex64::from_polar(r, 2.0 * std::f64::consts::PI * s) + z * z
            }
            LocalModel::Feps { eps } => {
                let base = Complex64::from_polar(r, std::f64::consts::PI * s) + z * z;
                base + *eps
                    * Complex64::new(0.0, 4.0 * std::f64::consts::PI * s).exp()
            }
        }
    }
}

/// Evaluates a model at a chart point, rejecting chart mismatches.
pub fn eval_local_model(model: LocalModel, p: &LocalPoint) -> Result<Complex64> {
    if p.chart != model.chart() {
        return Err(Error::ChartMismatch {
            want: model.chart(),
            got: p.chart,
        });
    }
    Ok(model.eval_raw(p.r, p.s, p.z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_values() {
        let one = eval_local_model(LocalModel::Fm, &LocalPoint::m(1.0, 0.0, Complex64::new(0.0, 0.0)))
            .unwrap();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        for k in 0..7 {
            let s = k as f64 / 7.0 * 2.0;
            let v = eval_local_model(
                LocalModel::Fm,
                &LocalPoint::m(0.0, s, Complex64::new(0.0, 0.0)),
            )
            .unwrap();
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn identification_invariance() {
        let z = Complex64::new(0.3, -0.4);
        let a = eval_local_model(LocalModel::Fm, &LocalPoint::m(1.0, 1.0, z)).unwrap();
        let b = eval_local_model(LocalModel::Fm, &LocalPoint::m(-1.0, 0.0, z)).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!((a - Complex64::new(-1.0, 0.0) - z * z).norm() < 1e-15);
    }

    #[test]
    fn chart_mismatch_rejected() {
        let p = LocalPoint::a(1.0, 0.0, Complex64::new(0.0, 0.0));
        assert!(eval_local_model(LocalModel::Fm, &p).is_err());
        assert!(eval_local_model(LocalModel::Fa, &p).is_ok());
    }
}
