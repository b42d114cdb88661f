//! Deterministic SVG plots: fixed canvas, coordinates truncated to 1e-4,
//! byte-stable for fixed inputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::config::NumericConfig;
use super::curves::{fiber_branch_points, flowed_attach_circles};
use super::gamma::gamma;
use crate::{Error, Result};

const CANVAS: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgArtifact {
    /// The critical-value curve of the perturbed model.
    Gamma,
    /// The projected isotoped attaching circles with the branch loci.
    Attach,
    /// Branch data of the reference fiber in the projection plane.
    Fiber,
}

impl SvgArtifact {
    pub fn file_name(&self) -> &'static str {
        match self {
            SvgArtifact::Gamma => "gamma.svg",
            SvgArtifact::Attach => "attach.svg",
            SvgArtifact::Fiber => "fiber.svg",
        }
    }
}

fn fmt_coord(v: f64) -> String {
    // truncate to the fixed plot precision so output is byte-stable
    format!("{:.4}", (v * 1e4).round() / 1e4)
}

struct Canvas {
    body: String,
    scale: f64,
    center: (f64, f64),
}

impl Canvas {
    fn new(scale: f64, center: (f64, f64)) -> Self {
        Canvas {
            body: String::new(),
            scale,
            center,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            CANVAS / 2.0 + self.scale * (x - self.center.0),
            CANVAS / 2.0 - self.scale * (y - self.center.1),
        )
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, closed: bool) {
        if pts.is_empty() {
            return;
        }
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let (px, py) = self.map(*x, *y);
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{} {} ", fmt_coord(px), fmt_coord(py));
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(
            self.body,
            "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            d.trim_end(),
            color
        );
    }

    fn dot(&mut self, x: f64, y: f64, color: &str) {
        let (px, py) = self.map(x, y);
        let _ = writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>",
            fmt_coord(px),
            fmt_coord(py),
            color
        );
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n<rect width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            c = CANVAS as u64
        )
    }
}

fn gamma_svg(cfg: &NumericConfig) -> String {
    let eps = cfg.eps;
    let mut canvas = Canvas::new(0.28 * CANVAS / eps.max(1e-9), (0.0, 0.0));
    let n = 1024;
    let pts: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / n as f64;
            let g = gamma(eps, theta);
            (g.re, g.im)
        })
        .collect();
    canvas.polyline(&pts, "black", true);
    canvas.dot(0.0, 0.0, "gray");
    canvas.finish()
}

fn attach_svg(cfg: &NumericConfig) -> Result<String> {
    let mut canvas = Canvas::new(CANVAS / 3.2, (0.5, 0.0));
    // branch loci: the images of the two branch curves under
    // [r, s] -> r exp(2 pi i s) form the vertical line Re = 1/2
    canvas.polyline(&[(0.5, -1.2), (0.5, 1.2)], "lightgray", false);
    let (k1, k2) = flowed_attach_circles(cfg, 256)?;
    for (curve, color) in [(&k1, "crimson"), (&k2, "steelblue")] {
        let pts: Vec<(f64, f64)> = curve
            .samples
            .iter()
            .map(|p| {
                let g = Complex64::from_polar(p.r, 2.0 * std::f64::consts::PI * p.s);
                (g.re, g.im)
            })
            .collect();
        canvas.polyline(&pts, color, true);
    }
    for b in fiber_branch_points() {
        let g = Complex64::from_polar(b.r, 2.0 * std::f64::consts::PI * b.s);
        canvas.dot(g.re, g.im, "black");
    }
    Ok(canvas.finish())
}

fn fiber_svg(_cfg: &NumericConfig) -> String {
    let mut canvas = Canvas::new(CANVAS / 4.0, (0.0, 0.0));
    // the annulus core and the two branch points in chart coordinates
    // (r horizontal, s vertical, one period)
    canvas.polyline(&[(0.0, 0.0), (0.0, 1.0)], "lightgray", false);
    canvas.polyline(&[(-1.5, 0.0), (1.5, 0.0)], "lightgray", false);
    for b in fiber_branch_points() {
        canvas.dot(b.r, b.s, "black");
    }
    // the projection of the attaching-circle routes r = cos(2 pi s)
    let n = 512;
    let pts: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            ((2.0 * std::f64::consts::PI * s).cos(), s)
        })
        .collect();
    canvas.polyline(&pts, "crimson", false);
    canvas.finish()
}

/// Renders the requested artifacts into `dir`, returning the written
/// paths. Errors on an empty artifact list or an unwritable directory.
pub fn render_svg(artifacts: &[SvgArtifact], dir: &Path, cfg: &NumericConfig) -> Result<Vec<PathBuf>> {
    if artifacts.is_empty() {
        return Err(Error::EmptyArtifact);
    }
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for artifact in artifacts {
        let content = match artifact {
            SvgArtifact::Gamma => gamma_svg(cfg),
            SvgArtifact::Attach => attach_svg(cfg)?,
            SvgArtifact::Fiber => fiber_svg(cfg),
        };
        let path = dir.join(artifact.file_name());
        std::fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_bytes() {
        let cfg = NumericConfig::default();
        let a = gamma_svg(&cfg);
        let b = gamma_svg(&cfg);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("<path"));
    }

    #[test]
    fn empty_artifact_list_rejected() {
        let cfg = NumericConfig::default();
        let dir = std::env::temp_dir().join("mfib-svg-test-empty");
        assert!(matches!(
            render_svg(&[], &dir, &cfg),
            Err(Error::EmptyArtifact)
        ));
    }

    #[test]
    fn writes_files() {
        let cfg = NumericConfig::default();
        let dir = std::env::temp_dir().join("mfib-svg-test-write");
        let paths = render_svg(&[SvgArtifact::Gamma, SvgArtifact::Fiber], &dir, &cfg).unwrap();
        assert_eq!(paths.len(), 2);
        for p in paths {
            let data = std::fs::read(p).unwrap();
            assert!(!data.is_empty());
        }
    }
}
