//! Word algebra for the mapping class group of a closed non-orientable
//! surface, with its action on mod-2 first homology.
//!
//! Words multiply in application order: `rep(w1 . w2) = rep(w2) * rep(w1)`
//! as matrices acting on column vectors, matching the convention
//! `[xi_1] . [xi_2] = [xi_2 o xi_1]`.
//!
//! The representation is not faithful: a Dehn twist along a mod-2
//! null-homologous curve (such as the boundary `delta` of a one-holed Klein
//! bottle, whose class is the sum of the two enclosed crosscap cores taken
//! as 0 in the closed surface) acts trivially, so equality of matrices is
//! only a necessary condition for equality in the group.

use std::fmt;

use crate::surface::{sidedness, IntClass, Sidedness, SurfaceSpec, Z2Class};
use crate::{Error, Result};

/// Generator of the mapping class group: a Dehn twist along a two-sided
/// class or a standard crosscap transposition `u_i` interchanging
/// crosscaps `i` and `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    DehnTwist { class: Z2Class, handedness: i8 },
    CrosscapTransposition { surface: SurfaceSpec, index: usize },
}

impl Generator {
    pub fn dehn_twist(class: Z2Class, handedness: i8) -> Result<Self> {
        if sidedness(&class)? != Sidedness::TwoSided {
            return Err(Error::OneSidedTwist);
        }
        Ok(Generator::DehnTwist { class, handedness })
    }

    pub fn crosscap_transposition(surface: SurfaceSpec, index: usize) -> Result<Self> {
        if surface.orientable {
            return Err(Error::NonOrientableRequired(surface.to_string()));
        }
        if index == 0 || index + 1 > surface.genus {
            return Err(Error::IndexOutOfRange {
                index,
                max: surface.genus.saturating_sub(1),
            });
        }
        Ok(Generator::CrosscapTransposition { surface, index })
    }

    pub fn surface(&self) -> SurfaceSpec {
        match self {
            Generator::DehnTwist { class, .. } => class.surface(),
            Generator::CrosscapTransposition { surface, .. } => *surface,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::DehnTwist { class, handedness } => {
                let sign = if *handedness >= 0 { '+' } else { '-' };
                write!(f, "t ")?;
                for c in class.coords() {
                    write!(f, "{c}")?;
                }
                write!(f, " {sign}")
            }
            Generator::CrosscapTransposition { index, .. } => write!(f, "u {index}"),
        }
    }
}

/// A word in the generators; exponents are +/-1 and the empty word is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct McgWord {
    entries: Vec<(Generator, i8)>,
}

impl McgWord {
    pub fn identity() -> Self {
        McgWord::default()
    }

    pub fn from_entries(entries: Vec<(Generator, i8)>) -> Result<Self> {
        let mut surface = None;
        for (gen, exp) in &entries {
            if exp.abs() != 1 {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("exponent must be +/-1, got {exp}"),
                });
            }
            match surface {
                None => surface = Some(gen.surface()),
                Some(s) if s == gen.surface() => {}
                Some(_) => return Err(Error::MixedSurfaces),
            }
        }
        Ok(McgWord { entries })
    }

    pub fn push(&mut self, gen: Generator, exp: i8) -> Result<()> {
        if let Some(s) = self.surface() {
            if s != gen.surface() {
                return Err(Error::MixedSurfaces);
            }
        }
        self.entries.push((gen, exp));
        Ok(())
    }

    pub fn entries(&self) -> &[(Generator, i8)] {
        &self.entries
    }

    pub fn surface(&self) -> Option<SurfaceSpec> {
        self.entries.first().map(|(g, _)| g.surface())
    }

    pub fn inverse(&self) -> McgWord {
        McgWord {
            entries: self
                .entries
                .iter()
                .rev()
                .map(|(g, e)| (g.clone(), -e))
                .collect(),
        }
    }

    /// `w^-1 . core . w` with the conjugator applied first.
    pub fn conjugate(core: &McgWord, by: &McgWord) -> Result<McgWord> {
        let mut entries = by.inverse().entries;
        entries.extend(core.entries.iter().cloned());
        entries.extend(by.entries.iter().cloned());
        McgWord::from_entries(entries)
    }

    /// Concatenation in application order (`self` applied first).
    pub fn then(&self, other: &McgWord) -> Result<McgWord> {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        McgWord::from_entries(entries)
    }
}

/// A g-by-g matrix over Z/2, orthogonal with respect to the identity
/// pairing (`M^T M = I`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Matrix {
    size: usize,
    rows: Vec<Vec<u8>>,
}

impl Z2Matrix {
    pub fn identity(size: usize) -> Self {
        let rows = (0..size)
            .map(|i| (0..size).map(|j| u8::from(i == j)).collect())
            .collect();
        Z2Matrix { size, rows }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self> {
        let size = rows.len();
        for row in &rows {
            if row.len() != size {
                return Err(Error::MatrixIndex);
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v & 1).collect())
            .collect();
        Ok(Z2Matrix { size, rows })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i][j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Z2Matrix::identity(self.size)
    }

    /// Matrix product `self * other` over Z/2.
    pub fn mul(&self, other: &Z2Matrix) -> Z2Matrix {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let mut rows = vec![vec![0u8; n]; n];
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k] == 1 {
                    for j in 0..n {
                        rows[i][j] ^= other.rows[k][j];
                    }
                }
            }
        }
        Z2Matrix { size: n, rows }
    }

    pub fn transpose(&self) -> Z2Matrix {
        let n = self.size;
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.rows[j][i]).collect())
            .collect();
        Z2Matrix { size: n, rows }
    }

    pub fn is_orthogonal(&self) -> bool {
        self.transpose().mul(self).is_identity()
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.size);
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (m, x)| acc ^ (m & x)))
            .collect()
    }
}

impl fmt::Display for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for v in row {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// Mod-2 transvection `x -> x + <x, c> c`. Defined for any class; the zero
/// class gives the identity, which is the witness that the representation
/// cannot separate a twist along a null class from the identity.
pub fn mod2_transvection(c: &Z2Class) -> Z2Matrix {
    let g = c.surface().genus;
    let mut m = Z2Matrix::identity(g);
    let coords = c.coords();
    for i in 0..g {
        for j in 0..g {
            // column e_j maps to e_j + <e_j, c> c = e_j + c_j * c
            m.rows[i][j] ^= coords[j] & coords[i];
        }
    }
    m
}

/// Mod-2 action of a single generator: twists act by transvections
/// (handedness-independent mod 2), `u_i` swaps coordinates `i` and `i+1`.
pub fn rep_generator(gen: &Generator) -> Z2Matrix {
    match gen {
        Generator::DehnTwist { class, .. } => mod2_transvection(class),
        Generator::CrosscapTransposition { surface, index } => {
            let g = surface.genus;
            let mut m = Z2Matrix::identity(g);
            let (i, j) = (index - 1, *index);
            m.rows[i][i] = 0;
            m.rows[j][j] = 0;
            m.rows[i][j] = 1;
            m.rows[j][i] = 1;
            m
        }
    }
}

/// Product of generator matrices in application order (acting on column
/// vectors, the first entry is applied first). Requires a genus when the
/// word is empty.
pub fn rep_word(word: &McgWord, genus: usize) -> Result<Z2Matrix> {
    let mut m = Z2Matrix::identity(genus);
    for (gen, _exp) in word.entries() {
        if gen.surface().genus != genus {
            return Err(Error::MixedSurfaces);
        }
        // every generator matrix is an involution mod 2, so exponents
        // do not change the product
        m = rep_generator(gen).mul(&m);
    }
    Ok(m)
}

/// `rep(u_i)^2 = rep(t_delta)`: the boundary of the i-th one-holed Klein
/// bottle is null mod 2, so both sides must be the identity.
pub fn check_square_relation(surface: SurfaceSpec, index: usize) -> Result<bool> {
    let u = Generator::crosscap_transposition(surface, index)?;
    let m = rep_generator(&u);
    let delta = Z2Class::zero(surface)?;
    Ok(m.mul(&m) == mod2_transvection(&delta))
}

/// Integer transvection matrices on `H_1` of an orientable surface.
///
/// `twist(c): x -> x + <x, c> c` in the symplectic pairing, and the inverse
/// twist flips the sign. The transvection depends on the class only up to
/// sign.
pub fn int_transvection(c: &IntClass, inverse: bool) -> Result<Vec<Vec<i64>>> {
    let n = 2 * c.surface().genus;
    let sign = if inverse { -1 } else { 1 };
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    // column j: e_j + sign * <e_j, c> c
    for j in 0..n {
        let pairing = {
            // <e_j, c> for the block form J
            let g = c.surface().genus;
            let mut acc = 0i64;
            for b in 0..g {
                let (ca, cb) = (c.coords()[2 * b], c.coords()[2 * b + 1]);
                if j == 2 * b {
                    acc += cb;
                } else if j == 2 * b + 1 {
                    acc -= ca;
                }
            }
            acc
        };
        for i in 0..n {
            m[i][j] += sign * pairing * c.coords()[i];
        }
    }
    Ok(m)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// Integral action of the orientation lift of a Dehn twist: a twist along
/// the lift `c1` followed by an inverse twist along the other lift `c2`,
/// composed in application order (matrices act on column vectors, so the
/// result is `M(c2^-1) * M(c1)`).
///
/// The lifts are caller data; they must be square-zero classes on the same
/// orientable surface.
pub fn orientation_lift_twist(c1: &IntClass, c2: &IntClass) -> Result<Vec<Vec<i64>>> {
    if c1.surface() != c2.surface() {
        return Err(Error::SurfaceMismatch(
            c1.surface().to_string(),
            c2.surface().to_string(),
        ));
    }
    let first = int_transvection(c1, false)?;
    let second = int_transvection(c2, true)?;
    Ok(mat_mul(&second, &first))
}

/// Word file format: one generator per line, `u <i>` or `t <coords> <+|->`,
/// with an optional trailing exponent column (`u 1 -1`). A `surface N <g>`
/// header fixes the surface; otherwise it is inferred from the first
/// generator's data.
pub fn parse_word_file(text: &str) -> Result<(SurfaceSpec, McgWord)> {
    let mut surface: Option<SurfaceSpec> = None;
    let mut word = McgWord::identity();
    let mut max_u_index = 0usize;
    let mut pending: Vec<(usize, Vec<String>)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        let lineno = lineno + 1;
        match toks[0].as_str() {
            "surface" => {
                let spec = SurfaceSpec::parse(&toks[1..].join(" ")).map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                surface = Some(spec);
            }
            "u" | "t" => {
                if toks[0] == "u" {
                    if let Some(i) = toks.get(1).and_then(|t| t.parse::<usize>().ok()) {
                        max_u_index = max_u_index.max(i);
                    }
                }
                if toks[0] == "t" {
                    if let Some(cs) = toks.get(1) {
                        // twist coordinates fix the genus when no header is given
                        let g = cs.len();
                        if surface.is_none() {
                            surface = Some(SurfaceSpec::closed_non_orientable(g)?);
                        }
                    }
                }
                pending.push((lineno, toks));
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown generator `{other}`"),
                })
            }
        }
    }

    let surface = match surface {
        Some(s) => s,
        None => SurfaceSpec::closed_non_orientable(max_u_index + 1)?,
    };

    for (lineno, toks) in pending {
        let (gen, exp) = parse_generator(&toks, surface).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: lineno, msg },
            other => Error::Parse {
                line: lineno,
                msg: other.to_string(),
            },
        })?;
        word.push(gen, exp)?;
    }
    Ok((surface, word))
}

pub(crate) fn parse_generator(toks: &[String], surface: SurfaceSpec) -> Result<(Generator, i8)> {
    let fail = |msg: String| Error::Parse { line: 0, msg };
    match toks[0].as_str() {
        "u" => {
            let index: usize = toks
                .get(1)
                .ok_or_else(|| fail("missing index".into()))?
                .parse()
                .map_err(|_| fail("bad index".into()))?;
            let exp = parse_exp(toks.get(2))?;
            Ok((Generator::crosscap_transposition(surface, index)?, exp))
        }
        "t" => {
            let coords = crate::surface::parse_bits(
                toks.get(1).ok_or_else(|| fail("missing coords".into()))?,
            )?;
            let class = Z2Class::new(surface, coords)?;
            let handedness = match toks.get(2).map(String::as_str) {
                Some("+") => 1i8,
                Some("-") => -1i8,
                other => {
                    return Err(fail(format!(
                        "expected twist handedness + or -, got {other:?}"
                    )))
                }
            };
            let exp = parse_exp(toks.get(3))?;
            Ok((Generator::dehn_twist(class, handedness)?, exp))
        }
        other => Err(fail(format!("unknown generator `{other}`"))),
    }
}

fn parse_exp(tok: Option<&String>) -> Result<i8> {
    match tok.map(String::as_str) {
        None => Ok(1),
        Some("1") | Some("+1") => Ok(1),
        Some("-1") => Ok(-1),
        Some(other) => Err(Error::Parse {
            line: 0,
            msg: format!("exponent must be +/-1, got `{other}`"),
        }),
    }
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
    fn swap_matrix_on_n2() {
        let u1 = Generator::crosscap_transposition(n(2), 1).unwrap();
        let m = rep_generator(&u1);
        assert_eq!(m, Z2Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap());
    }

    #[test]
    fn transvection_along_mu1_plus_mu2() {
        let t = Generator::dehn_twist(class(2, &[1, 1]), 1).unwrap();
        let m = rep_generator(&t);
        // expand x -> x + <x,c>c on e1, e2: both basis vectors swap
        assert_eq!(m, Z2Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap());

        let t3 = Generator::dehn_twist(class(3, &[1, 1, 0]), 1).unwrap();
        let m3 = rep_generator(&t3);
        assert_eq!(
            m3,
            Z2Matrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap()
        );
    }

    #[test]
    fn one_sided_twist_rejected() {
        assert!(matches!(
            Generator::dehn_twist(class(2, &[1, 0]), 1),
            Err(Error::OneSidedTwist)
        ));
    }

    #[test]
    fn word_products() {
        assert!(rep_word(&McgWord::identity(), 2).unwrap().is_identity());

        let u1 = Generator::crosscap_transposition(n(2), 1).unwrap();
        let w = McgWord::from_entries(vec![(u1.clone(), 1), (u1.clone(), 1)]).unwrap();
        assert!(rep_word(&w, 2).unwrap().is_identity());

        // twist along mu1+mu2 then u1: both act by the swap, product is I
        let t = Generator::dehn_twist(class(2, &[1, 1]), 1).unwrap();
        let w = McgWord::from_entries(vec![(t, 1), (u1, 1)]).unwrap();
        assert!(rep_word(&w, 2).unwrap().is_identity());
    }

    #[test]
    fn square_relation() {
        assert!(check_square_relation(n(2), 1).unwrap());
        assert!(check_square_relation(n(3), 1).unwrap());
        assert!(check_square_relation(n(3), 2).unwrap());
    }

    #[test]
    fn null_twist_witness() {
        // the representation cannot distinguish a twist along a class that
        // is null mod 2 from the identity word
        let delta = Z2Class::zero(n(2)).unwrap();
        assert!(mod2_transvection(&delta).is_identity());
        assert_eq!(
            mod2_transvection(&delta),
            rep_word(&McgWord::identity(), 2).unwrap()
        );
    }

    #[test]
    fn lift_twist_cancels_on_equal_lifts() {
        let t = SurfaceSpec::orientable(1, 0);
        let a1 = IntClass::basis_a(t, 1).unwrap();
        let id = orientation_lift_twist(&a1, &a1).unwrap();
        assert_eq!(id, vec![vec![1, 0], vec![0, 1]]);
        let m = orientation_lift_twist(&a1, &a1.neg()).unwrap();
        assert_eq!(m, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn lift_twist_matrix_oracle() {
        let t = SurfaceSpec::orientable(1, 0);
        let a1 = IntClass::basis_a(t, 1).unwrap();
        let b1 = IntClass::basis_b(t, 1).unwrap();
        let first = int_transvection(&a1, false).unwrap();
        let second = int_transvection(&b1, true).unwrap();
        assert_eq!(first, vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(second, vec![vec![1, 0], vec![-1, 1]]);
        // brute-force 2x2 multiplication in application order:
        // the composite acting on column vectors is second * first
        let mut oracle = vec![vec![0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    oracle[i][j] += second[i][k] * first[k][j];
                }
            }
        }
        assert_eq!(orientation_lift_twist(&a1, &b1).unwrap(), oracle);
        assert_eq!(oracle, vec![vec![1, -1], vec![-1, 2]]);
    }

    #[test]
    fn word_file_parsing() {
        let (surface, word) = parse_word_file("surface N 2\nu 1\nu 1 -1\n").unwrap();
        assert_eq!(surface, n(2));
        assert_eq!(word.entries().len(), 2);
        assert_eq!(word.entries()[1].1, -1);

        let (surface, word) = parse_word_file("t 110 +\nu 1\n").unwrap();
        assert_eq!(surface, n(3));
        assert!(rep_word(&word, 3).unwrap().is_orthogonal());

        assert!(parse_word_file("q 7\n").is_err());
    }

    #[test]
    fn conjugated_word_is_involution_in_rep() {
        let u1 = Generator::crosscap_transposition(n(3), 1).unwrap();
        let t = Generator::dehn_twist(class(3, &[1, 1, 0]), 1).unwrap();
        let core = McgWord::from_entries(vec![(u1, 1)]).unwrap();
        let by = McgWord::from_entries(vec![(t, 1)]).unwrap();
        let conj = McgWord::conjugate(&core, &by).unwrap();
        let m = rep_word(&conj, 3).unwrap();
        assert!(m.mul(&m).is_identity());
        assert!(!m.is_identity());
    }
}
