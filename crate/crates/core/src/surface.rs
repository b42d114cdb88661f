//! Fiber surfaces and their first-homology pairings.
//!
//! Non-orientable surfaces carry mod-2 classes in the crosscap-core basis
//! `mu_1, ..., mu_g` (crosscaps ordered along a chain); orientable surfaces
//! carry integer classes in a fixed symplectic basis `a_1, b_1, ...`.

use std::fmt;

use crate::{Error, Result};

/// A compact connected surface, identified by orientability, genus and
/// boundary count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceSpec {
    pub orientable: bool,
    pub genus: usize,
    pub boundary_count: usize,
}

impl SurfaceSpec {
    pub fn non_orientable(genus: usize, boundary_count: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::EmptyGenus);
        }
        Ok(SurfaceSpec {
            orientable: false,
            genus,
            boundary_count,
        })
    }

    pub fn orientable(genus: usize, boundary_count: usize) -> Self {
        SurfaceSpec {
            orientable: true,
            genus,
            boundary_count,
        }
    }

    /// Closed non-orientable surface `N_g`.
    pub fn closed_non_orientable(genus: usize) -> Result<Self> {
        Self::non_orientable(genus, 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let g = self.genus as i64;
        let b = self.boundary_count as i64;
        if self.orientable {
            2 - 2 * g - b
        } else {
            2 - g - b
        }
    }

    /// Parses `N g b` / `S g b` (boundary count optional, default 0).
    pub fn parse(text: &str) -> Result<Self> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let fail = |msg: &str| Error::Parse {
            line: 0,
            msg: msg.to_string(),
        };
        if toks.is_empty() {
            return Err(fail("empty surface spec"));
        }
        let orientable = match toks[0] {
            "N" => false,
            "S" => true,
            other => return Err(fail(&format!("unknown surface kind `{other}`"))),
        };
        let genus: usize = toks
            .get(1)
            .ok_or_else(|| fail("missing genus"))?
            .parse()
            .map_err(|_| fail("bad genus"))?;
        let boundary: usize = match toks.get(2) {
            Some(t) => t.parse().map_err(|_| fail("bad boundary count"))?,
            None => 0,
        };
        if orientable {
            Ok(SurfaceSpec::orientable(genus, boundary))
        } else {
            SurfaceSpec::non_orientable(genus, boundary)
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.orientable { "S" } else { "N" };
        write!(f, "{} {} {}", kind, self.genus, self.boundary_count)
    }
}

/// The orientation double cover of a non-orientable `(g, b)` surface is the
/// orientable `(g-1, 2b)` surface.
pub fn double_cover_spec(s: &SurfaceSpec) -> Result<SurfaceSpec> {
    if s.orientable {
        return Err(Error::NonOrientableRequired(s.to_string()));
    }
    Ok(SurfaceSpec::orientable(s.genus - 1, 2 * s.boundary_count))
}

/// A mod-2 homology class on a closed non-orientable surface, in the
/// crosscap-core basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Class {
    surface: SurfaceSpec,
    coords: Vec<u8>,
}

impl Z2Class {
    pub fn new(surface: SurfaceSpec, coords: Vec<u8>) -> Result<Self> {
        if surface.orientable {
            return Err(Error::NonOrientableRequired(surface.to_string()));
        }
        if coords.len() != surface.genus {
            return Err(Error::CoordLength {
                want: surface.genus,
                got: coords.len(),
            });
        }
        Ok(Z2Class {
            surface,
            coords: coords.into_iter().map(|c| c & 1).collect(),
        })
    }

    /// The crosscap core `mu_i` (1-based).
    pub fn crosscap_core(surface: SurfaceSpec, i: usize) -> Result<Self> {
        let mut coords = vec![0u8; surface.genus];
        if i == 0 || i > surface.genus {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: surface.genus,
            });
        }
        coords[i - 1] = 1;
        Z2Class::new(surface, coords)
    }

    pub fn zero(surface: SurfaceSpec) -> Result<Self> {
        let g = surface.genus;
        Z2Class::new(surface, vec![0; g])
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Z2Class) -> Result<Z2Class> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch(
                self.surface.to_string(),
                other.surface.to_string(),
            ));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a ^ b) & 1)
            .collect();
        Z2Class::new(self.surface, coords)
    }

    /// Parses the textual form `class g=3 coords=101` (big-endian over
    /// `mu_1 ... mu_g`).
    pub fn parse(text: &str) -> Result<Self> {
        let fail = |msg: String| Error::Parse { line: 0, msg };
        let mut genus = None;
        let mut coords: Option<Vec<u8>> = None;
        for tok in text.split_whitespace() {
            if tok == "class" {
                continue;
            } else if let Some(g) = tok.strip_prefix("g=") {
                genus = Some(g.parse::<usize>().map_err(|_| fail("bad genus".into()))?);
            } else if let Some(cs) = tok.strip_prefix("coords=") {
                coords = Some(parse_bits(cs)?);
            } else {
                return Err(fail(format!("unexpected token `{tok}`")));
            }
        }
        let coords = coords.ok_or_else(|| fail("missing coords".into()))?;
        let genus = genus.unwrap_or(coords.len());
        Z2Class::new(SurfaceSpec::closed_non_orientable(genus)?, coords)
    }
}

pub(crate) fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("coordinate digit must be 0 or 1, got `{other}`"),
            }),
        })
        .collect()
}

impl fmt::Display for Z2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class g={} coords=", self.surface.genus)?;
        for c in &self.coords {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Mod-2 intersection pairing in the crosscap-core basis: `sum_i x_i y_i`.
pub fn mod2_pairing(x: &Z2Class, y: &Z2Class) -> Result<u8> {
    if x.surface != y.surface {
        return Err(Error::SurfaceMismatch(
            x.surface.to_string(),
            y.surface.to_string(),
        ));
    }
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| a & b)
        .fold(0, |acc, v| acc ^ v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

/// A nonzero class is two-sided exactly when its mod-2 self-intersection
/// vanishes.
pub fn sidedness(x: &Z2Class) -> Result<Sidedness> {
    if x.is_zero() {
        return Err(Error::ZeroClass);
    }
    if mod2_pairing(x, x)? == 0 {
        Ok(Sidedness::TwoSided)
    } else {
        Ok(Sidedness::OneSided)
    }
}

/// An integer homology class on an orientable surface, in a fixed symplectic
/// basis `a_1, b_1, ..., a_g, b_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntClass {
    surface: SurfaceSpec,
    coords: Vec<i64>,
}

impl IntClass {
    pub fn new(surface: SurfaceSpec, coords: Vec<i64>) -> Result<Self> {
        if !surface.orientable {
            return Err(Error::OrientableRequired(surface.to_string()));
        }
        if coords.len() != 2 * surface.genus {
            return Err(Error::CoordLength {
                want: 2 * surface.genus,
                got: coords.len(),
            });
        }
        Ok(IntClass { surface, coords })
    }

    /// Basis class `a_i` (1-based).
    pub fn basis_a(surface: SurfaceSpec, i: usize) -> Result<Self> {
        let mut coords = vec![0i64; 2 * surface.genus];
        if i == 0 || i > surface.genus {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: surface.genus,
            });
        }
        coords[2 * (i - 1)] = 1;
        IntClass::new(surface, coords)
    }

    /// Basis class `b_i` (1-based).
    pub fn basis_b(surface: SurfaceSpec, i: usize) -> Result<Self> {
        let mut coords = vec![0i64; 2 * surface.genus];
        if i == 0 || i > surface.genus {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: surface.genus,
            });
        }
        coords[2 * (i - 1) + 1] = 1;
        IntClass::new(surface, coords)
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn neg(&self) -> IntClass {
        IntClass {
            surface: self.surface,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &IntClass) -> Result<IntClass> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch(
                self.surface.to_string(),
                other.surface.to_string(),
            ));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        IntClass::new(self.surface, coords)
    }

    pub fn sub(&self, other: &IntClass) -> Result<IntClass> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> IntClass {
        IntClass {
            surface: self.surface,
            coords: self.coords.iter().map(|c| k * c).collect(),
        }
    }
}

/// Algebraic intersection `a^T J b` for the block form
/// `J = diag([[0,1],[-1,0]], ...)`, so `<a_i, b_i> = 1`.
pub fn symplectic_pairing(a: &IntClass, b: &IntClass) -> Result<i64> {
    if a.surface != b.surface {
        return Err(Error::SurfaceMismatch(
            a.surface.to_string(),
            b.surface.to_string(),
        ));
    }
    let mut acc = 0i64;
    for i in 0..a.surface.genus {
        let (xa, xb) = (a.coords[2 * i], a.coords[2 * i + 1]);
        let (ya, yb) = (b.coords[2 * i], b.coords[2 * i + 1]);
        acc += xa * yb - xb * ya;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(g: usize) -> SurfaceSpec {
        SurfaceSpec::closed_non_orientable(g).unwrap()
    }

    fn class(g: usize, bits: &[u8]) -> Z2Class {
        Z2Class::new(n(g), bits.to_vec()).unwrap()
    }

    #[test]
    fn pairing_on_n2() {
        let mu1 = Z2Class::crosscap_core(n(2), 1).unwrap();
        let mu2 = Z2Class::crosscap_core(n(2), 2).unwrap();
        assert_eq!(mod2_pairing(&mu1, &mu1).unwrap(), 1);
        assert_eq!(mod2_pairing(&mu1, &mu2).unwrap(), 0);
        let s = mu1.add(&mu2).unwrap();
        // expand bilinearly: 1 + 0 + 0 + 1 = 0 mod 2
        assert_eq!(mod2_pairing(&s, &s).unwrap(), 0);
    }

    #[test]
    fn pairing_rejects_mismatch() {
        let mu1 = Z2Class::crosscap_core(n(2), 1).unwrap();
        let nu1 = Z2Class::crosscap_core(n(3), 1).unwrap();
        assert!(mod2_pairing(&mu1, &nu1).is_err());
    }

    #[test]
    fn sidedness_examples() {
        assert_eq!(
            sidedness(&class(2, &[0, 1])).unwrap(),
            Sidedness::OneSided
        );
        assert_eq!(
            sidedness(&class(2, &[1, 1])).unwrap(),
            Sidedness::TwoSided
        );
        assert_eq!(
            sidedness(&class(3, &[1, 1, 1])).unwrap(),
            Sidedness::OneSided
        );
        assert!(matches!(
            sidedness(&class(2, &[0, 0])),
            Err(Error::ZeroClass)
        ));
    }

    #[test]
    fn double_cover_examples() {
        assert_eq!(
            double_cover_spec(&n(2)).unwrap(),
            SurfaceSpec::orientable(1, 0)
        );
        assert_eq!(
            double_cover_spec(&n(3)).unwrap(),
            SurfaceSpec::orientable(2, 0)
        );
        let moebius = SurfaceSpec::non_orientable(1, 1).unwrap();
        assert_eq!(
            double_cover_spec(&moebius).unwrap(),
            SurfaceSpec::orientable(0, 2)
        );
        assert!(double_cover_spec(&SurfaceSpec::orientable(1, 0)).is_err());
    }

    #[test]
    fn chi_doubles_under_cover() {
        for g in 1..=6 {
            for b in 0..=3 {
                let s = SurfaceSpec::non_orientable(g, b).unwrap();
                let cover = double_cover_spec(&s).unwrap();
                assert_eq!(cover.euler_characteristic(), 2 * s.euler_characteristic());
            }
        }
    }

    #[test]
    fn symplectic_examples() {
        let t = SurfaceSpec::orientable(1, 0);
        let a1 = IntClass::basis_a(t, 1).unwrap();
        let b1 = IntClass::basis_b(t, 1).unwrap();
        assert_eq!(symplectic_pairing(&a1, &b1).unwrap(), 1);
        assert_eq!(symplectic_pairing(&a1, &a1).unwrap(), 0);
        let u = a1.add(&b1).unwrap();
        let v = a1.sub(&b1).unwrap();
        assert_eq!(symplectic_pairing(&u, &v).unwrap(), -2);
    }

    #[test]
    fn exhaustive_bilinearity_small_genus() {
        for g in 1..=6 {
            let all: Vec<Z2Class> = (0..(1usize << g))
                .map(|mask| {
                    let bits: Vec<u8> = (0..g).map(|i| ((mask >> i) & 1) as u8).collect();
                    class(g, &bits)
                })
                .collect();
            for x in &all {
                for y in &all {
                    let p = mod2_pairing(x, y).unwrap();
                    assert_eq!(p, mod2_pairing(y, x).unwrap());
                    for z in all.iter().take(8) {
                        let xz = x.add(z).unwrap();
                        let lhs = mod2_pairing(&xz, y).unwrap();
                        let rhs = p ^ mod2_pairing(z, y).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                    if !x.is_zero() {
                        let self_pairing = mod2_pairing(x, x).unwrap();
                        let sd = sidedness(x).unwrap();
                        assert_eq!(sd == Sidedness::TwoSided, self_pairing == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let c = class(3, &[1, 0, 1]);
        assert_eq!(c.to_string(), "class g=3 coords=101");
        assert_eq!(Z2Class::parse("class g=3 coords=101").unwrap(), c);
        assert_eq!(SurfaceSpec::parse("N 3 0").unwrap(), n(3));
        assert_eq!(
            SurfaceSpec::parse("S 2 4").unwrap(),
            SurfaceSpec::orientable(2, 4)
        );
    }
}
