//! Ternary linear codes and the structured generator-matrix families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf3::{GF3Matrix, GF3Vector, MonomialMap};

/// Sign applied to wrapped entries of a circulant-type matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wrap {
    /// Plain circulant (`mu = +1`).
    Circulant,
    /// Negacirculant (`mu = -1`).
    Negacirculant,
}

/// Square matrix whose row `i + 1` is row `i` shifted right by one place,
/// with the entry that wraps around multiplied by `mu`.
pub fn circulant(first_row: &GF3Vector, mu: Wrap) -> Result<GF3Matrix> {
    let m = first_row.len();
    if m == 0 {
        return Err(Error::Param("circulant of an empty row".into()));
    }
    let mut rows = Vec::with_capacity(m);
    let mut cur = *first_row;
    for _ in 0..m {
        rows.push(cur);
        let mut next = GF3Vector::zero(m)?;
        for j in 1..m {
            next.set(j, cur.get(j - 1));
        }
        let wrapped = cur.get(m - 1);
        next.set(
            0,
            match mu {
                Wrap::Circulant => wrapped,
                Wrap::Negacirculant => (3 - wrapped) % 3,
            },
        );
        cur = next;
    }
    GF3Matrix::new(m, rows)
}

/// Which construction produced a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Bordered double circulant `(I | border + circulant R)`.
    Bdc,
    /// Quasi-twisted `(I | N)` with `N` negacirculant.
    Qt,
    /// Four-negacirculant `(I | [[A, B], [2B^T, A^T]])`.
    #[serde(rename = "4nc")]
    FourNega,
    /// Row space of a Hadamard matrix read over GF(3).
    Hadamard,
    /// Anything else.
    Other,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Bdc => "bdc",
            Family::Qt => "qt",
            Family::FourNega => "4nc",
            Family::Hadamard => "hadamard",
            Family::Other => "other",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bdc" => Ok(Family::Bdc),
            "qt" => Ok(Family::Qt),
            "4nc" => Ok(Family::FourNega),
            "hadamard" => Ok(Family::Hadamard),
            "other" => Ok(Family::Other),
            _ => Err(Error::Parse(format!("unknown code family {s:?}"))),
        }
    }
}

/// A linear code over GF(3).
#[derive(Clone, Debug)]
pub struct TernaryCode {
    n: usize,
    construction: GF3Matrix,
    gen: GF3Matrix,
    family: Family,
    label: String,
}

impl TernaryCode {
    /// The row space of `generator`. The matrix is kept verbatim alongside its
    /// reduced echelon form; it may have dependent rows.
    pub fn from_generator(generator: GF3Matrix, family: Family, label: impl Into<String>) -> Self {
        let gen = generator.row_reduce();
        Self {
            n: generator.ncols(),
            construction: generator,
            gen,
            family,
            label: label.into(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension.
    #[inline]
    pub fn k(&self) -> usize {
        self.gen.nrows()
    }

    /// Generator in reduced row echelon form (exactly `k` rows).
    #[inline]
    pub fn generator(&self) -> &GF3Matrix {
        &self.gen
    }

    /// The matrix the code was built from, before reduction.
    #[inline]
    pub fn construction_matrix(&self) -> &GF3Matrix {
        &self.construction
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn contains(&self, v: &GF3Vector) -> bool {
        v.len() == self.n && self.gen.rref_contains(v)
    }

    /// Same row space, regardless of generator.
    pub fn same_code(&self, other: &Self) -> bool {
        self.n == other.n && self.gen == other.gen
    }

    /// `C^perp = {x : x . y = 0 for all y in C}`.
    pub fn dual(&self) -> Result<Self> {
        let h = if self.k() == 0 {
            GF3Matrix::identity(self.n)?
        } else {
            self.gen.null_space()?
        };
        Ok(Self::from_generator(h, Family::Other, format!("dual({})", self.label)))
    }

    /// `n = 2k` and every pair of generator rows is orthogonal.
    pub fn is_self_dual(&self) -> bool {
        self.n == 2 * self.k()
            && self
                .gen
                .rows()
                .iter()
                .enumerate()
                .all(|(i, a)| self.gen.rows()[i..].iter().all(|b| a.dot(b) == 0))
    }

    /// The image `C * P` under a monomial map.
    pub fn apply_monomial(&self, map: &MonomialMap) -> Result<Self> {
        if map.len() != self.n {
            return Err(Error::Dimension(format!(
                "monomial map on {} coordinates applied to a code of length {}",
                map.len(),
                self.n
            )));
        }
        let rows = self
            .construction
            .rows()
            .iter()
            .map(|r| map.apply(r))
            .collect::<Result<_>>()?;
        Ok(Self::from_generator(
            GF3Matrix::new(self.n, rows)?,
            self.family,
            self.label.clone(),
        ))
    }
}

fn checked_len(v: &GF3Vector, expected: usize, what: &str) -> Result<()> {
    if v.len() != expected {
        return Err(Error::Dimension(format!(
            "{what} has length {}, expected {expected}",
            v.len()
        )));
    }
    Ok(())
}

/// Generator matrix `(I_m | B)` where `B` has first row `(0, 1, ..., 1)`,
/// first column `(0, 1, ..., 1)^T` and the circulant `R` below-right.
pub fn bordered_double_circulant_matrix(r: &GF3Vector) -> Result<GF3Matrix> {
    let m = r.len() + 1;
    if r.is_empty() {
        return Err(Error::Param("border row needs a nonempty circulant".into()));
    }
    let circ = circulant(r, Wrap::Circulant)?;
    let mut border = GF3Matrix::zeros(m, m)?;
    for j in 1..m {
        border.set(0, j, 1);
        border.set(j, 0, 1);
    }
    for i in 1..m {
        for j in 1..m {
            border.set(i, j, circ.get(i - 1, j - 1));
        }
    }
    GF3Matrix::identity(m)?.hconcat(&border)
}

/// The `[2m, m]` bordered double circulant code with circulant first row `r`
/// (`r` has length `m - 1`).
pub fn bordered_double_circulant(r: &GF3Vector) -> Result<TernaryCode> {
    let g = bordered_double_circulant_matrix(r)?;
    Ok(TernaryCode::from_generator(g, Family::Bdc, format!("bdc:{r}")))
}

pub fn quasi_twisted_matrix(r: &GF3Vector) -> Result<GF3Matrix> {
    let n = circulant(r, Wrap::Negacirculant)?;
    GF3Matrix::identity(r.len())?.hconcat(&n)
}

/// The `[2m, m]` quasi-twisted code `(I_m | N)`, `N` negacirculant with first row `r`.
pub fn quasi_twisted(r: &GF3Vector) -> Result<TernaryCode> {
    let g = quasi_twisted_matrix(r)?;
    Ok(TernaryCode::from_generator(g, Family::Qt, format!("qt:{r}")))
}

/// The right-hand block `[[A, B], [2B^T, A^T]]` of a four-negacirculant generator.
pub fn four_negacirculant_block(r_a: &GF3Vector, r_b: &GF3Vector) -> Result<GF3Matrix> {
    checked_len(r_b, r_a.len(), "r_B")?;
    let a = circulant(r_a, Wrap::Negacirculant)?;
    let b = circulant(r_b, Wrap::Negacirculant)?;
    let top = a.hconcat(&b)?;
    let bottom = b.transpose()?.scale(2).hconcat(&a.transpose()?)?;
    top.vconcat(&bottom)
}

pub fn four_negacirculant_matrix(r_a: &GF3Vector, r_b: &GF3Vector) -> Result<GF3Matrix> {
    let m = four_negacirculant_block(r_a, r_b)?;
    GF3Matrix::identity(2 * r_a.len())?.hconcat(&m)
}

/// The `[4m, 2m]` four-negacirculant code.
pub fn four_negacirculant(r_a: &GF3Vector, r_b: &GF3Vector) -> Result<TernaryCode> {
    let g = four_negacirculant_matrix(r_a, r_b)?;
    Ok(TernaryCode::from_generator(
        g,
        Family::FourNega,
        format!("4nc:{r_a}:{r_b}"),
    ))
}

/// `M * M^T == 2 I`, the self-duality criterion for a generator `(I | M)`.
pub fn is_minus_orthogonal(m: &GF3Matrix) -> bool {
    let rows = m.rows();
    rows.iter().enumerate().all(|(i, a)| {
        rows[i..]
            .iter()
            .enumerate()
            .all(|(d, b)| a.dot(b) == if d == 0 { 2 } else { 0 })
    })
}

/// Self-duality of the four-negacirculant code from first rows alone.
///
/// `A A^T + B B^T` is negacirculant, so it equals `2 I` iff its first row is
/// `(2, 0, ..., 0)`.
pub fn four_negacirculant_self_dual_fast(a_rows: &[GF3Vector], b_rows: &[GF3Vector]) -> bool {
    let (a0, b0) = (&a_rows[0], &b_rows[0]);
    a_rows.iter().zip(b_rows).enumerate().all(|(j, (a, b))| {
        let v = (a0.dot(a) + b0.dot(b)) % 3;
        v == if j == 0 { 2 } else { 0 }
    })
}

/// Self-duality of a quasi-twisted code from the rows of `N`.
pub fn quasi_twisted_self_dual_fast(n_rows: &[GF3Vector]) -> bool {
    let r0 = &n_rows[0];
    n_rows
        .iter()
        .enumerate()
        .all(|(j, r)| r0.dot(r) == if j == 0 { 2 } else { 0 })
}

/// Self-duality of the bordered double circulant code with circulant first
/// row `r` (length `m - 1`), without building the generator.
///
/// Needs `m - 1 = 2 mod 3` for the border row, `sum(r) = 0`,
/// `wt(r) = 1 mod 3` and every nonzero cyclic autocorrelation of `r` equal
/// to 2.
pub fn bordered_double_circulant_self_dual_fast(r: &GF3Vector) -> bool {
    let s = r.symbols();
    let l = s.len();
    if l % 3 != 2 {
        return false;
    }
    let sum: u32 = s.iter().map(|&x| x as u32).sum();
    if sum % 3 != 0 || r.weight() % 3 != 1 {
        return false;
    }
    (1..l).all(|d| {
        let c: u32 = (0..l).map(|j| (s[j] * s[(j + d) % l]) as u32).sum();
        c % 3 == 2
    })
}

/// A code description as stored in bundled tables and spec files:
/// `family={bdc|qt|4nc} n=36 rA=<ternary> [rB=<ternary>] label=<name>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: Family,
    pub n: usize,
    pub r_a: String,
    pub r_b: Option<String>,
    pub label: String,
}

impl CodeSpec {
    pub fn build(&self) -> Result<TernaryCode> {
        let ra = GF3Vector::from_ternary_str(&self.r_a)?;
        let code = match self.family {
            Family::Bdc => {
                if self.n != 2 * (ra.len() + 1) {
                    return Err(Error::Dimension(format!(
                        "bdc of length {} needs rA of length {}",
                        self.n,
                        self.n / 2 - 1
                    )));
                }
                bordered_double_circulant(&ra)?
            }
            Family::Qt => {
                if self.n != 2 * ra.len() {
                    return Err(Error::Dimension(format!(
                        "qt of length {} needs rA of length {}",
                        self.n,
                        self.n / 2
                    )));
                }
                quasi_twisted(&ra)?
            }
            Family::FourNega => {
                let rb = self
                    .r_b
                    .as_deref()
                    .ok_or_else(|| Error::Parse("4nc spec needs rB".into()))
                    .and_then(GF3Vector::from_ternary_str)?;
                if self.n != 4 * ra.len() {
                    return Err(Error::Dimension(format!(
                        "4nc of length {} needs rA of length {}",
                        self.n,
                        self.n / 4
                    )));
                }
                four_negacirculant(&ra, &rb)?
            }
            f => return Err(Error::Param(format!("family {f} has no parametric construction"))),
        };
        Ok(code.with_label(self.label.clone()))
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={} n={} rA={}", self.family, self.n, self.r_a)?;
        if let Some(rb) = &self.r_b {
            write!(f, " rB={rb}")?;
        }
        write!(f, " label={}", self.label)
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut family, mut n, mut r_a, mut r_b, mut label) = (None, None, None, None, None);
        for tok in s.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))?;
            match key {
                "family" => family = Some(val.parse::<Family>()?),
                "n" => {
                    n = Some(
                        val.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad length {val:?}: {e}")))?,
                    )
                }
                "rA" => r_a = Some(val.to_string()),
                "rB" => r_b = Some(val.to_string()),
                "label" => label = Some(val.to_string()),
                _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
            }
        }
        let spec = CodeSpec {
            family: family.ok_or_else(|| Error::Parse("missing family".into()))?,
            n: n.ok_or_else(|| Error::Parse("missing n".into()))?,
            r_a: r_a.ok_or_else(|| Error::Parse("missing rA".into()))?,
            r_b,
            label: label.ok_or_else(|| Error::Parse("missing label".into()))?,
        };
        for r in std::iter::once(&spec.r_a).chain(spec.r_b.as_ref()) {
            GF3Vector::from_ternary_str(r)?;
        }
        Ok(spec)
    }
}
