//! Critical-set scan: find where the chart-coordinate Jacobian of a model
//! drops rank, by thresholding the 2x2 minors of a central-difference
//! Jacobian on a grid and refining candidates with a damped Gauss-Newton
//! iteration on the minor system.

use num_complex::Complex64;

use super::charts::LocalPoint;
use super::config::NumericConfig;
use super::models::ChartMap;
use crate::{Error, Result};

/// Central-difference Jacobian of the map in chart coordinates
/// `(r, s, x, y)`, as two rows (real and imaginary parts), step `h`.
fn jacobian(map: &dyn ChartMap, p: &[f64; 4], h: f64) -> [[f64; 4]; 2] {
    let mut j = [[0.0; 4]; 2];
    for k in 0..4 {
        let mut hi = *p;
        let mut lo = *p;
        hi[k] += h;
        lo[k] -= h;
        let fhi = eval(map, &hi);
        let flo = eval(map, &lo);
        j[0][k] = (fhi.re - flo.re) / (2.0 * h);
        j[1][k] = (fhi.im - flo.im) / (2.0 * h);
    }
    j
}

fn eval(map: &dyn ChartMap, p: &[f64; 4]) -> Complex64 {
    map.eval_raw(p[0], p[1], Complex64::new(p[2], p[3]))
}

/// The six 2x2 minors of the 2x4 Jacobian.
fn minors(j: &[[f64; 4]; 2]) -> [f64; 6] {
    let mut out = [0.0; 6];
    let mut idx = 0;
    for a in 0..4 {
        for b in (a + 1)..4 {
            out[idx] = j[0][a] * j[1][b] - j[0][b] * j[1][a];
            idx += 1;
        }
    }
    out
}

fn max_abs_minor(map: &dyn ChartMap, p: &[f64; 4], h: f64) -> f64 {
    minors(&jacobian(map, p, h))
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Damped Gauss-Newton on the minor system; returns the refined point when
/// the residual drops below `tol`.
fn refine(map: &dyn ChartMap, seed: [f64; 4], h: f64, tol: f64) -> Option<[f64; 4]> {
    let mut p = seed;
    for _ in 0..60 {
        let m = minors(&jacobian(map, &p, h));
        let res: f64 = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if res < tol {
            return Some(p);
        }
        // numerical derivative of the minor vector
        let mut g = [[0.0f64; 4]; 6];
        let dh = h;
        for k in 0..4 {
            let mut hi = p;
            let mut lo = p;
            hi[k] += dh;
            lo[k] -= dh;
            let mhi = minors(&jacobian(map, &hi, h));
            let mlo = minors(&jacobian(map, &lo, h));
            for (i, row) in g.iter_mut().enumerate() {
                row[k] = (mhi[i] - mlo[i]) / (2.0 * dh);
            }
        }
        // normal equations with Levenberg damping
        let mut ata = [[0.0f64; 4]; 4];
        let mut atb = [0.0f64; 4];
        for i in 0..6 {
            for a in 0..4 {
                for b in 0..4 {
                    ata[a][b] += g[i][a] * g[i][b];
                }
                atb[a] -= g[i][a] * m[i];
            }
        }
        let damp = 1e-10 + 1e-3 * res;
        for (a, row) in ata.iter_mut().enumerate() {
            row[a] += damp;
        }
        let Some(step) = solve4(&ata, &atb) else {
            return None;
        };
        let norm: f64 = step.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cap = 0.25;
        let scale = if norm > cap { cap / norm } else { 1.0 };
        for k in 0..4 {
            p[k] += scale * step[k];
        }
    }
    None
}

fn solve4(a: &[[f64; 4]; 4], b: &[f64; 4]) -> Option<[f64; 4]> {
    let mut m = [[0.0f64; 5]; 4];
    for i in 0..4 {
        m[i][..4].copy_from_slice(&a[i]);
        m[i][4] = b[i];
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for i in 0..4 {
            if i != col {
                let f = m[i][col] / m[col][col];
                for j in col..5 {
                    m[i][j] -= f * m[col][j];
                }
            }
        }
    }
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = m[i][4] / m[i][i];
    }
    Some(out)
}

/// Scans the fundamental domain `r in [-1, 1], s in [0, 1), |x|,|y| <= 3/4`
/// for critical points, refines candidates and clusters them into
/// connected components.
pub fn critical_scan(map: &dyn ChartMap, cfg: &NumericConfig) -> Result<Vec<Vec<LocalPoint>>> {
    cfg.validate()?;
    if cfg.grid < 2 {
        return Err(Error::EmptyGrid);
    }
    let n = cfg.grid;
    let h = cfg.fd_step;
    let r_range = 1.0;
    let z_range = 0.75;

    // derivative scale for the seed threshold
    let mut scale = 0.0f64;
    for k in 0..8 {
        let p = [
            r_range * (k as f64 / 7.0 * 2.0 - 1.0),
            k as f64 / 8.0,
            0.3,
            -0.2,
        ];
        scale = scale.max(max_abs_minor(map, &p, h));
    }
    let spacing = 2.0 * r_range / n as f64;
    let threshold = (scale.max(1.0)) * spacing * 2.0;

    // per s-slice, keep the few grid points of smallest minor magnitude
    // below the threshold as refinement seeds
    let mut seeds: Vec<[f64; 4]> = Vec::new();
    for is in 0..n {
        let s = is as f64 / n as f64;
        let mut slice: Vec<([f64; 4], f64)> = Vec::new();
        for ir in 0..=n {
            let r = -r_range + 2.0 * r_range * ir as f64 / n as f64;
            for ix in 0..=n {
                let x = -z_range + 2.0 * z_range * ix as f64 / n as f64;
                for iy in 0..=n {
                    let y = -z_range + 2.0 * z_range * iy as f64 / n as f64;
                    let p = [r, s, x, y];
                    let v = max_abs_minor(map, &p, h);
                    if v < threshold {
                        slice.push((p, v));
                    }
                }
            }
        }
        slice.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        seeds.extend(slice.into_iter().take(6).map(|(p, _)| p));
    }

    // refine, then keep points that genuinely converged
    let tol = 1e-11;
    let mut found: Vec<LocalPoint> = Vec::new();
    for seed in seeds {
        if let Some(p) = refine(map, seed, h, tol) {
            let lp = LocalPoint::new(map.chart(), p[0], p[1], Complex64::new(p[2], p[3]))
                .normalized();
            if found.iter().all(|q| q.chart_dist(&lp) > spacing / 4.0) {
                found.push(lp);
            }
        }
    }

    // cluster into connected components by chart distance
    let mut parent: Vec<usize> = (0..found.len()).collect();
    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let link = 3.0 * spacing;
    for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            if found[i].chart_dist(&found[j]) < link {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut components: std::collections::BTreeMap<usize, Vec<LocalPoint>> =
        std::collections::BTreeMap::new();
    for i in 0..found.len() {
        let r = root(&mut parent, i);
        components.entry(r).or_default().push(found[i]);
    }
    Ok(components.into_values().collect())
}

/// Largest deviation of the scanned points from the unperturbed critical
/// circle `{r = 0, z = 0}`.
pub fn residual_against_core_circle(components: &[Vec<LocalPoint>]) -> f64 {
    components
        .iter()
        .flatten()
        .map(|p| (p.r * p.r + p.z.norm_sqr()).sqrt())
        .fold(0.0, f64::max)
}

/// Largest deviation of the scanned points from the perturbed critical
/// circle `r = -4 eps cos(3 theta)`, `theta = pi s`, `z = 0`.
pub fn residual_against_perturbed_circle(components: &[Vec<LocalPoint>], eps: f64) -> f64 {
    components
        .iter()
        .flatten()
        .map(|p| {
            let q = p.normalized();
            let theta = std::f64::consts::PI * q.s;
            ((q.r + 4.0 * eps * (3.0 * theta).cos()).abs()).max(q.z.norm())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::models::LocalModel;

    #[test]
    fn finds_the_unperturbed_circle() {
        let cfg = NumericConfig {
            grid: 8,
            ..NumericConfig::default()
        };
        let comps = critical_scan(&LocalModel::Fm, &cfg).unwrap();
        assert_eq!(comps.len(), 1, "expected one critical component");
        assert!(residual_against_core_circle(&comps) < 1e-6);
    }

    #[test]
    fn finds_the_perturbed_circle() {
        let eps = 0.01;
        let cfg = NumericConfig {
            grid: 8,
            ..NumericConfig::default()
        };
        let comps = critical_scan(&LocalModel::Feps { eps }, &cfg).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(residual_against_perturbed_circle(&comps, eps) < 1e-5);
    }

    #[test]
    fn submersion_probe_is_empty() {
        struct Probe;
        impl ChartMap for Probe {
            fn chart(&self) -> Chart {
                Chart::A
            }
            fn eval_raw(&self, r: f64, s: f64, z: Complex64) -> Complex64 {
                Complex64::from_polar(r, 2.0 * std::f64::consts::PI * s) + z
            }
        }
        let cfg = NumericConfig {
            grid: 6,
            ..NumericConfig::default()
        };
        let comps = critical_scan(&Probe, &cfg).unwrap();
        assert!(comps.is_empty());
    }
}
