//! Fibration models built from monodromy factorizations, with handle
//! counts and Euler characteristics for the total space and its
//! orientation double cover.
//!
//! Over a disk any factorization into conjugated crosscap transpositions is
//! accepted; over the sphere the mod-2 monodromy product must be the
//! identity. That check is a necessary condition only: the representation
//! is not faithful, so a passing build reports "mod-2 necessary condition"
//! and never a group-level identity certificate.

use crate::mcg::{parse_generator, rep_word, McgWord, Z2Matrix};
use crate::surface::{double_cover_spec, SurfaceSpec};
use crate::{Error, Result};

/// Base surface of the fibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    D2,
    S2,
    /// Sphere with marked sections; stores the magnitudes `|a_i|` of the
    /// section framings (the signs are not modeled).
    S2WithSections { framing_magnitudes: Vec<u64> },
}

impl Base {
    pub fn is_closed(&self) -> bool {
        !matches!(self, Base::D2)
    }
}

/// Handle counts `(h0, h1, h2, h3, h4)`.
pub type HandleCounts = (u64, u64, u64, u64, u64);

/// A fibration model: closed non-orientable fiber of genus `g`, base, and
/// an ordered list of singularities given as words conjugate to a standard
/// crosscap transposition.
#[derive(Debug, Clone)]
pub struct MFibrationModel {
    fiber: SurfaceSpec,
    base: Base,
    singularities: Vec<McgWord>,
}

impl MFibrationModel {
    pub fn fiber(&self) -> SurfaceSpec {
        self.fiber
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn singularities(&self) -> &[McgWord] {
        &self.singularities
    }

    pub fn singularity_count(&self) -> usize {
        self.singularities.len()
    }
}

/// The induced model on the orientation double cover: orientable fiber of
/// genus `g - 1` and `2n` two-handles from the singularities.
#[derive(Debug, Clone)]
pub struct MtildeModel {
    fiber: SurfaceSpec,
    pair_count: usize,
    parent: MFibrationModel,
}

impl MtildeModel {
    pub fn fiber(&self) -> SurfaceSpec {
        self.fiber
    }

    pub fn pair_count(&self) -> usize {
        self.pair_count
    }

    pub fn parent(&self) -> &MFibrationModel {
        &self.parent
    }
}

/// Validates and assembles a model.
///
/// Every entry must act on `N_g` by an orthogonal involution different from
/// the identity (the mod-2 shadow of being conjugate to a crosscap
/// transposition). For closed bases the product of the entries in
/// application order must be the identity matrix.
pub fn build(base: Base, fiber_genus: usize, entries: Vec<McgWord>) -> Result<MFibrationModel> {
    let fiber = SurfaceSpec::closed_non_orientable(fiber_genus)?;
    if let Base::S2WithSections { framing_magnitudes } = &base {
        if framing_magnitudes.is_empty() {
            return Err(Error::EmptySections);
        }
    }
    let mut product = Z2Matrix::identity(fiber_genus);
    for (index, entry) in entries.iter().enumerate() {
        if let Some(s) = entry.surface() {
            if s != fiber {
                return Err(Error::MixedSurfaces);
            }
        }
        let m = rep_word(entry, fiber_genus)?;
        if m.is_identity() || !m.mul(&m).is_identity() || !m.is_orthogonal() {
            return Err(Error::EntryNotInvolution { index });
        }
        product = m.mul(&product);
    }
    if base.is_closed() && !product.is_identity() {
        return Err(Error::ProductNotIdentity {
            product: product.to_string(),
        });
    }
    Ok(MFibrationModel {
        fiber,
        base,
        singularities: entries,
    })
}

/// Handle counts of the total space: `(1, g, 1+n, 0, 0)` over the disk and
/// `(1, g, 2+n, g, 1)` over the sphere.
pub fn handle_counts(m: &MFibrationModel) -> HandleCounts {
    let g = m.fiber.genus as u64;
    let n = m.singularities.len() as u64;
    if m.base.is_closed() {
        (1, g, 2 + n, g, 1)
    } else {
        (1, g, 1 + n, 0, 0)
    }
}

fn alternating_sum(h: HandleCounts) -> i64 {
    h.0 as i64 - h.1 as i64 + h.2 as i64 - h.3 as i64 + h.4 as i64
}

/// Euler characteristic as the alternating handle-count sum; equals
/// `2 - g + n` over the disk and `4 - 2g + n` over the sphere.
pub fn euler_char(m: &MFibrationModel) -> i64 {
    alternating_sum(handle_counts(m))
}

/// Passes to the orientation double cover.
pub fn double_cover(m: &MFibrationModel) -> Result<MtildeModel> {
    let fiber = double_cover_spec(&m.fiber)?;
    Ok(MtildeModel {
        fiber,
        pair_count: 2 * m.singularities.len(),
        parent: m.clone(),
    })
}

/// Cover handle counts: `(1, 2(g-1), 1+2n, 0, 0)` over the disk and
/// `(1, 2(g-1), 2+2n, 2(g-1), 1)` over the sphere.
pub fn cover_handle_counts(c: &MtildeModel) -> HandleCounts {
    let h1 = 2 * c.fiber.genus as u64;
    let n2 = c.pair_count as u64;
    if c.parent.base.is_closed() {
        (1, h1, 2 + n2, h1, 1)
    } else {
        (1, h1, 1 + n2, 0, 0)
    }
}

pub fn cover_euler_char(c: &MtildeModel) -> i64 {
    alternating_sum(cover_handle_counts(c))
}

/// Parses a factorization file:
///
/// ```text
/// fiber N genus=3
/// base S2
/// u 1
/// u 1
/// ```
///
/// Bases are `D2`, `S2` or `S2 sections=<m1,m2,...>`. Singularity entries
/// are generator lines as in word files, or conjugated entries
/// `conj: t 110 + ; u 1` whose last item is the core generator and whose
/// prefix is the conjugating word (applied before, inverted after).
pub fn parse_factorization(text: &str) -> Result<MFibrationModel> {
    let mut fiber_genus: Option<usize> = None;
    let mut base: Option<Base> = None;
    let mut entries: Vec<McgWord> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |msg: String| Error::Parse { line: lineno, msg };
        let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match toks[0].as_str() {
            "fiber" => {
                if toks.get(1).map(String::as_str) != Some("N") {
                    return Err(fail("fiber must be non-orientable (`fiber N genus=g`)".into()));
                }
                let g = toks
                    .get(2)
                    .and_then(|t| t.strip_prefix("genus="))
                    .ok_or_else(|| fail("missing genus=<g>".into()))?
                    .parse::<usize>()
                    .map_err(|_| fail("bad genus".into()))?;
                fiber_genus = Some(g);
            }
            "base" => {
                let kind = toks.get(1).ok_or_else(|| fail("missing base".into()))?;
                base = Some(match kind.as_str() {
                    "D2" => Base::D2,
                    "S2" => match toks.get(2) {
                        None => Base::S2,
                        Some(t) => {
                            let list = t
                                .strip_prefix("sections=")
                                .ok_or_else(|| fail(format!("unexpected token `{t}`")))?;
                            let mags = list
                                .split(',')
                                .map(|v| v.parse::<u64>())
                                .collect::<std::result::Result<Vec<_>, _>>()
                                .map_err(|_| fail("bad section framing magnitudes".into()))?;
                            Base::S2WithSections {
                                framing_magnitudes: mags,
                            }
                        }
                    },
                    other => return Err(fail(format!("unknown base `{other}`"))),
                });
            }
            _ => {
                let genus = fiber_genus
                    .ok_or_else(|| fail("generator line before `fiber` header".into()))?;
                let surface = SurfaceSpec::closed_non_orientable(genus)?;
                let word = parse_entry_line(line, surface).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { line: lineno, msg },
                    other => Error::Parse {
                        line: lineno,
                        msg: other.to_string(),
                    },
                })?;
                entries.push(word);
            }
        }
    }

    let genus = fiber_genus.ok_or(Error::Parse {
        line: 0,
        msg: "missing `fiber` header".into(),
    })?;
    let base = base.ok_or(Error::Parse {
        line: 0,
        msg: "missing `base` header".into(),
    })?;
    build(base, genus, entries)
}

fn parse_entry_line(line: &str, surface: SurfaceSpec) -> Result<McgWord> {
    if let Some(rest) = line.strip_prefix("conj:") {
        let items: Vec<&str> = rest.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "empty conjugated entry".into(),
            });
        }
        let mut prefix = McgWord::identity();
        for item in &items[..items.len() - 1] {
            let toks: Vec<String> = item.split_whitespace().map(str::to_string).collect();
            let (gen, exp) = parse_generator(&toks, surface)?;
            prefix.push(gen, exp)?;
        }
        let toks: Vec<String> = items[items.len() - 1]
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let (core_gen, core_exp) = parse_generator(&toks, surface)?;
        let core = McgWord::from_entries(vec![(core_gen, core_exp)])?;
        McgWord::conjugate(&core, &prefix)
    } else {
        let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        let (gen, exp) = parse_generator(&toks, surface)?;
        McgWord::from_entries(vec![(gen, exp)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::Generator;

    fn n(g: usize) -> SurfaceSpec {
        SurfaceSpec::closed_non_orientable(g).unwrap()
    }

    fn u(g: usize, i: usize) -> McgWord {
        McgWord::from_entries(vec![(
            Generator::crosscap_transposition(n(g), i).unwrap(),
            1,
        )])
        .unwrap()
    }

    fn x0() -> MFibrationModel {
        build(
            Base::S2WithSections {
                framing_magnitudes: vec![1],
            },
            2,
            vec![u(2, 1), u(2, 1)],
        )
        .unwrap()
    }

    fn x1() -> MFibrationModel {
        build(Base::S2, 3, vec![u(3, 1), u(3, 1)]).unwrap()
    }

    #[test]
    fn builds_the_two_reference_models() {
        assert_eq!(handle_counts(&x0()), (1, 2, 4, 2, 1));
        assert_eq!(euler_char(&x0()), 2);
        assert_eq!(handle_counts(&x1()), (1, 3, 4, 3, 1));
        assert_eq!(euler_char(&x1()), 0);
    }

    #[test]
    fn closed_base_needs_identity_product() {
        let err = build(Base::S2, 2, vec![u(2, 1)]).unwrap_err();
        assert!(matches!(err, Error::ProductNotIdentity { .. }));
        // over the disk the same entry list is fine
        assert!(build(Base::D2, 2, vec![u(2, 1)]).is_ok());
    }

    #[test]
    fn trivial_disk_bundle() {
        let m = build(Base::D2, 1, vec![]).unwrap();
        assert_eq!(handle_counts(&m), (1, 1, 1, 0, 0));
        assert_eq!(euler_char(&m), 1);
        let c = double_cover(&m).unwrap();
        assert_eq!(cover_handle_counts(&c), (1, 0, 1, 0, 0));
        assert_eq!(cover_euler_char(&c), 2);
    }

    #[test]
    fn cover_chi_doubles() {
        for (model, chi) in [(x0(), 2i64), (x1(), 0i64)] {
            assert_eq!(euler_char(&model), chi);
            let c = double_cover(&model).unwrap();
            assert_eq!(cover_euler_char(&c), 2 * chi);
            assert_eq!(c.fiber(), double_cover_spec(&model.fiber()).unwrap());
        }
    }

    #[test]
    fn adding_disk_singularity_bumps_chi_and_h2() {
        let m0 = build(Base::D2, 3, vec![u(3, 2)]).unwrap();
        let m1 = build(Base::D2, 3, vec![u(3, 2), u(3, 1)]).unwrap();
        assert_eq!(euler_char(&m1), euler_char(&m0) + 1);
        assert_eq!(handle_counts(&m1).2, handle_counts(&m0).2 + 1);
    }

    #[test]
    fn entry_validation() {
        // the identity word is not a crosscap transposition
        let err = build(Base::D2, 2, vec![McgWord::identity()]).unwrap_err();
        assert!(matches!(err, Error::EntryNotInvolution { index: 0 }));
    }

    #[test]
    fn parses_factorization_files() {
        let text = "fiber N genus=3\nbase S2\nu 1\nu 1\n";
        let m = parse_factorization(text).unwrap();
        assert_eq!(m.fiber(), n(3));
        assert_eq!(m.singularity_count(), 2);

        let text = "fiber N genus=3\nbase S2\nconj: t 110 + ; u 1\nconj: t 110 + ; u 1\n";
        let m = parse_factorization(text).unwrap();
        assert_eq!(m.singularity_count(), 2);

        let text = "fiber N genus=2\nbase S2 sections=1\nu 1\nu 1\n";
        let m = parse_factorization(text).unwrap();
        assert!(matches!(m.base(), Base::S2WithSections { .. }));

        assert!(parse_factorization("fiber N genus=2\nbase S2\nu 1\n").is_err());
    }
}
