//! Chain-level Kirby calculus for orientation double covers.
//!
//! A handle diagram is reduced to an integer relation matrix: one row per
//! 1-handle, one column per 2-handle, entries the signed passes of the
//! attaching circle. First homology is the cokernel, computed by Smith
//! normal form; Betti numbers of the closed oriented cover follow from
//! `b0 = b4 = 1`, `b3 = b1` and `b2 = chi - 2 + 2 b1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::fibration::{cover_euler_char, MtildeModel};
use crate::{Error, Result};

/// Integer relation matrix of 2-handle attaching classes over the 1-handle
/// basis: `one_handle_count` rows, one column per 2-handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPresentation {
    one_handle_count: usize,
    /// Column-major: `columns[j][i]` is the signed pass count of 2-handle
    /// `j` through 1-handle `i`.
    columns: Vec<Vec<i64>>,
}

impl ChainPresentation {
    pub fn new(one_handle_count: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        for col in &columns {
            if col.len() != one_handle_count {
                return Err(Error::CoordLength {
                    want: one_handle_count,
                    got: col.len(),
                });
            }
        }
        Ok(ChainPresentation {
            one_handle_count,
            columns,
        })
    }

    pub fn one_handle_count(&self) -> usize {
        self.one_handle_count
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    /// Row-major copy of the relation matrix.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.one_handle_count)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect()
    }
}

impl fmt::Display for ChainPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Invariant factors `d_1 | d_2 | ...` (all >= 1) and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<u64>,
    pub rank: usize,
}

/// Smith normal form of an integer matrix (row-major input).
///
/// Classical pivot reduction: pick an entry of minimal nonzero magnitude,
/// clear its row and column with Euclidean steps, then fold entries that
/// break divisibility back into the pivot row. Each round strictly shrinks
/// the pivot magnitude, so the loop terminates.
pub fn smith_normal_form(matrix: &[Vec<i64>]) -> SmithForm {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return SmithForm {
            factors: Vec::new(),
            rank: 0,
        };
    }
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let n = rows.min(cols);
    let mut factors: Vec<u64> = Vec::new();

    for t in 0..n {
        'pivot: loop {
            // move an entry of minimal nonzero magnitude to (t, t)
            let mut best: Option<(usize, usize, i128)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = a[i][j].abs();
                    if v != 0 && best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                let rank = factors.len();
                return SmithForm { factors, rank };
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let pivot = a[t][t];
            // reduce column t; a leftover remainder means a smaller pivot
            for i in (t + 1)..rows {
                let q = a[i][t].div_euclid(pivot);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    continue 'pivot;
                }
            }
            // reduce row t
            for j in (t + 1)..cols {
                let q = a[t][j].div_euclid(pivot);
                if q != 0 {
                    for i in t..rows {
                        let sub = q * a[i][t];
                        a[i][j] -= sub;
                    }
                }
                if a[t][j] != 0 {
                    continue 'pivot;
                }
            }
            // enforce divisibility of the remaining block by the pivot
            for i in (t + 1)..rows {
                if (t + 1..cols).any(|j| a[i][j] % pivot != 0) {
                    for j in t..cols {
                        let add = a[i][j];
                        a[t][j] += add;
                    }
                    continue 'pivot;
                }
            }
            factors.push(pivot.unsigned_abs() as u64);
            break;
        }
    }
    let rank = factors.len();
    SmithForm { factors, rank }
}

/// Independent oracle for small matrices: determinantal divisors.
/// `d_1 ... d_k = gcd` of all `k x k` minors, an invariant of unimodular
/// equivalence that avoids the reduction path entirely.
pub fn smith_factors_via_minor_gcds(matrix: &[Vec<i64>]) -> Vec<u64> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let n = rows.min(cols);
    let mut previous = 1i128;
    let mut factors = Vec::new();
    for k in 1..=n {
        let mut g: i128 = 0;
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let det = minor_det(matrix, &rs, &cs);
                g = gcd_i128(g, det);
            }
        }
        if g == 0 {
            break;
        }
        factors.push((g / previous) as u64);
        previous = g;
    }
    factors
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn minor_det(matrix: &[Vec<i64>], rs: &[usize], cs: &[usize]) -> i128 {
    let k = rs.len();
    let mut m: Vec<Vec<i128>> = rs
        .iter()
        .map(|&i| cs.iter().map(|&j| matrix[i][j] as i128).collect())
        .collect();
    // fraction-free Gaussian elimination (Bareiss)
    let mut sign = 1i128;
    let mut prev = 1i128;
    for t in 0..k {
        if m[t][t] == 0 {
            let Some(swap) = (t + 1..k).find(|&i| m[i][t] != 0) else {
                return 0;
            };
            m.swap(t, swap);
            sign = -sign;
        }
        for i in (t + 1)..k {
            for j in (t + 1)..k {
                m[i][j] = (m[i][j] * m[t][t] - m[i][t] * m[t][j]) / prev;
            }
            m[i][t] = 0;
        }
        prev = m[t][t];
    }
    sign * m[k - 1][k - 1]
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Cokernel of the relation matrix: free rank and invariant factors > 1.
pub fn h1_from_presentation(p: &ChainPresentation) -> (usize, Vec<u64>) {
    let snf = smith_normal_form(&p.rows());
    let free_rank = p.one_handle_count - snf.rank;
    let torsion: Vec<u64> = snf.factors.into_iter().filter(|&d| d > 1).collect();
    (free_rank, torsion)
}

/// Betti numbers and `H_1` torsion of a closed oriented 4-manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub betti: [u64; 5],
    pub h1_invariant_factors: Vec<u64>,
    pub chi: i64,
}

impl HomologyReport {
    pub fn h1_string(&self) -> String {
        pretty_h1(self.betti[1] as usize, &self.h1_invariant_factors)
    }
}

pub fn pretty_h1(free_rank: usize, torsion: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for _ in 0..free_rank {
        parts.push("Z".to_string());
    }
    for d in torsion {
        parts.push(format!("Z/{d}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Full Betti vector for a closed sphere-base cover model: duality fills
/// `b3 = b1`, `b4 = 1`, and `b2` is recovered from the Euler
/// characteristic.
pub fn betti_report(model: &MtildeModel, p: &ChainPresentation) -> Result<HomologyReport> {
    if !model.parent().base().is_closed() {
        return Err(Error::Parse {
            line: 0,
            msg: "betti report needs a closed (sphere) base".into(),
        });
    }
    let want = 2 * model.fiber().genus;
    if p.one_handle_count != want {
        return Err(Error::PresentationShape {
            want,
            got: p.one_handle_count,
        });
    }
    let (b1, torsion) = h1_from_presentation(p);
    let chi = cover_euler_char(model);
    let b2 = chi - 2 + 2 * b1 as i64;
    if b2 < 0 {
        return Err(Error::NegativeB2 { b2 });
    }
    Ok(HomologyReport {
        betti: [1, b1 as u64, b2 as u64, b1 as u64, 1],
        h1_invariant_factors: torsion,
        chi,
    })
}

/// A chain-level Kirby move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMove {
    /// Slide 2-handle `col` over 2-handle `over`: add `sign * column(over)`
    /// to `column(col)`.
    Slide { col: usize, over: usize, sign: i64 },
    /// Cancel 1-handle `row` against 2-handle `col`; needs a unit entry.
    Cancel { row: usize, col: usize },
}

/// Applies a move; slides preserve the cokernel, cancellations pivot away a
/// row/column pair without changing it.
pub fn chain_move(p: &ChainPresentation, mv: ChainMove) -> Result<ChainPresentation> {
    match mv {
        ChainMove::Slide { col, over, sign } => {
            if col == over {
                return Err(Error::SelfSlide);
            }
            if col >= p.columns.len() || over >= p.columns.len() {
                return Err(Error::MatrixIndex);
            }
            let mut columns = p.columns.clone();
            let add: Vec<i64> = columns[over].iter().map(|v| sign.signum() * v).collect();
            for (dst, a) in columns[col].iter_mut().zip(add) {
                *dst += a;
            }
            ChainPresentation::new(p.one_handle_count, columns)
        }
        ChainMove::Cancel { row, col } => {
            if row >= p.one_handle_count || col >= p.columns.len() {
                return Err(Error::MatrixIndex);
            }
            let pivot = p.columns[col][row];
            if pivot.abs() != 1 {
                return Err(Error::NoUnitPivot {
                    row,
                    col,
                    value: pivot,
                });
            }
            // clear row `row` using the unit column, then drop both
            let mut columns = p.columns.clone();
            let pivot_col = columns[col].clone();
            for (j, column) in columns.iter_mut().enumerate() {
                if j == col {
                    continue;
                }
                let factor = column[row] / pivot;
                if factor != 0 {
                    for (dst, src) in column.iter_mut().zip(&pivot_col) {
                        *dst -= factor * src;
                    }
                }
            }
            columns.remove(col);
            for column in &mut columns {
                column.remove(row);
            }
            ChainPresentation::new(p.one_handle_count - 1, columns)
        }
    }
}

/// A transcription of a dotted-circle handle diagram.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramTranscription {
    pub dotted: Vec<String>,
    pub components: Vec<DiagramComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramComponent {
    pub id: String,
    pub framing: Framing,
    /// Signed passes through dotted circles, accumulated per id.
    pub passes: BTreeMap<String, i64>,
    /// Symmetric linking metadata with other components (reported only).
    pub links: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Framing {
    Integer(i64),
    /// Framing induced by the fiber surface; the integer value relative to
    /// diagram conventions is supplied at transcription time when needed.
    Fiber,
}

impl fmt::Display for Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Framing::Integer(v) => write!(f, "{v}"),
            Framing::Fiber => write!(f, "fiber"),
        }
    }
}

/// Builds the relation matrix: column `j` is the signed pass vector of
/// component `j` over the dotted ids, in declaration order.
pub fn transcribe(d: &DiagramTranscription) -> Result<ChainPresentation> {
    let index: BTreeMap<&str, usize> = d
        .dotted
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let mut columns = Vec::with_capacity(d.components.len());
    for comp in &d.components {
        let mut col = vec![0i64; d.dotted.len()];
        for (dot, count) in &comp.passes {
            let Some(&i) = index.get(dot.as_str()) else {
                return Err(Error::DanglingDotted(dot.clone()));
            };
            col[i] += count;
        }
        columns.push(col);
    }
    ChainPresentation::new(d.dotted.len(), columns)
}

/// Parses a transcription file: `dot <id>`, `comp <id> framing=<int|fiber>`,
/// `pass <comp> <dot> <+1|-1>`, `link <comp> <comp> <int>`.
pub fn parse_transcription(text: &str) -> Result<DiagramTranscription> {
    let mut d = DiagramTranscription::default();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |msg: String| Error::Parse { line: lineno, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "dot" => {
                let id = toks.get(1).ok_or_else(|| fail("missing dotted id".into()))?;
                d.dotted.push((*id).to_string());
            }
            "comp" => {
                let id = toks.get(1).ok_or_else(|| fail("missing component id".into()))?;
                let framing = toks
                    .get(2)
                    .and_then(|t| t.strip_prefix("framing="))
                    .ok_or_else(|| fail("missing framing=<int|fiber>".into()))?;
                let framing = if framing == "fiber" {
                    Framing::Fiber
                } else {
                    Framing::Integer(
                        framing
                            .parse::<i64>()
                            .map_err(|_| fail("bad framing".into()))?,
                    )
                };
                d.components.push(DiagramComponent {
                    id: (*id).to_string(),
                    framing,
                    passes: BTreeMap::new(),
                    links: BTreeMap::new(),
                });
            }
            "pass" => {
                let comp = toks.get(1).ok_or_else(|| fail("missing component".into()))?;
                let dot = toks.get(2).ok_or_else(|| fail("missing dotted id".into()))?;
                let sign: i64 = toks
                    .get(3)
                    .ok_or_else(|| fail("missing sign".into()))?
                    .parse()
                    .map_err(|_| fail("bad sign".into()))?;
                if sign.abs() != 1 {
                    return Err(fail(format!("pass sign must be +1 or -1, got {sign}")));
                }
                let comp = d
                    .components
                    .iter_mut()
                    .find(|c| c.id == *comp)
                    .ok_or_else(|| fail(format!("unknown component `{comp}`")))?;
                *comp.passes.entry((*dot).to_string()).or_insert(0) += sign;
            }
            "link" => {
                let a = toks.get(1).ok_or_else(|| fail("missing component".into()))?;
                let b = toks.get(2).ok_or_else(|| fail("missing component".into()))?;
                let v: i64 = toks
                    .get(3)
                    .ok_or_else(|| fail("missing linking number".into()))?
                    .parse()
                    .map_err(|_| fail("bad linking number".into()))?;
                let mut set = |x: &str, y: &str| -> Result<()> {
                    let comp = d
                        .components
                        .iter_mut()
                        .find(|c| c.id == x)
                        .ok_or_else(|| Error::Parse {
                            line: lineno,
                            msg: format!("unknown component `{x}`"),
                        })?;
                    comp.links.insert(y.to_string(), v);
                    Ok(())
                };
                set(a, b)?;
                set(b, a)?;
            }
            other => return Err(fail(format!("unknown directive `{other}`"))),
        }
    }
    // validate pass references eagerly
    transcribe(&d)?;
    Ok(d)
}
