//! Bitsliced arithmetic over GF(3).
//!
//! A vector of length `n <= 64` is stored as two bitplanes: bit `j` of `ones`
//! is set iff coordinate `j` equals 1, bit `j` of `twos` iff it equals 2. The
//! two planes are always disjoint. Addition, negation and inner products are
//! a handful of word operations, which is what makes full sweeps over `3^18`
//! codewords affordable.

use std::fmt;

use crate::error::{Error, Result};

/// Longest vector representable in one pair of 64-bit planes.
pub const MAX_LEN: usize = 64;

#[inline(always)]
fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Coordinate-wise sum of two bitsliced GF(3) words.
#[inline(always)]
pub fn add_planes(a1: u64, a2: u64, b1: u64, b2: u64) -> (u64, u64) {
    let za = !(a1 | a2);
    let zb = !(b1 | b2);
    let r1 = (a1 & zb) | (b1 & za) | (a2 & b2);
    let r2 = (a2 & zb) | (b2 & za) | (a1 & b1);
    (r1, r2)
}

/// Inner product of two bitsliced words, reduced mod 3.
#[inline(always)]
pub fn dot_planes(a1: u64, a2: u64, b1: u64, b2: u64) -> u8 {
    let plus = ((a1 & b1) | (a2 & b2)).count_ones();
    let minus = ((a1 & b2) | (a2 & b1)).count_ones();
    ((plus + 2 * minus) % 3) as u8
}

/// A vector in GF(3)^n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF3Vector {
    len: u8,
    ones: u64,
    twos: u64,
}

impl GF3Vector {
    pub fn zero(len: usize) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::Param(format!("length {len} exceeds {MAX_LEN}")));
        }
        Ok(Self {
            len: len as u8,
            ones: 0,
            twos: 0,
        })
    }

    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        let mut v = Self::zero(symbols.len())?;
        for (j, &s) in symbols.iter().enumerate() {
            match s {
                0 => {}
                1 => v.ones |= 1 << j,
                2 => v.twos |= 1 << j,
                _ => return Err(Error::Param(format!("symbol {s} is not in GF(3)"))),
            }
        }
        Ok(v)
    }

    /// Parses a string of the digits `0`, `1`, `2`, coordinate 0 first.
    pub fn from_ternary_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::Parse(format!("invalid ternary digit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_symbols(&symbols)
    }

    /// Builds a vector directly from its planes. Bits above `len` are dropped.
    pub fn from_planes(len: usize, ones: u64, twos: u64) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::Param(format!("length {len} exceeds {MAX_LEN}")));
        }
        if ones & twos != 0 {
            return Err(Error::Param("bitplanes overlap".into()));
        }
        let m = mask(len);
        Ok(Self {
            len: len as u8,
            ones: ones & m,
            twos: twos & m,
        })
    }

    pub fn unit(len: usize, j: usize) -> Result<Self> {
        let mut v = Self::zero(len)?;
        if j >= len {
            return Err(Error::Param(format!("index {j} out of range for length {len}")));
        }
        v.ones = 1 << j;
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn planes(&self) -> (u64, u64) {
        (self.ones, self.twos)
    }

    #[inline]
    pub fn get(&self, j: usize) -> u8 {
        debug_assert!(j < self.len());
        ((self.ones >> j) & 1) as u8 | ((((self.twos >> j) & 1) as u8) << 1)
    }

    pub fn set(&mut self, j: usize, s: u8) {
        assert!(j < self.len(), "coordinate out of range");
        let bit = 1u64 << j;
        self.ones &= !bit;
        self.twos &= !bit;
        match s % 3 {
            1 => self.ones |= bit,
            2 => self.twos |= bit,
            _ => {}
        }
    }

    pub fn symbols(&self) -> Vec<u8> {
        (0..self.len()).map(|j| self.get(j)).collect()
    }

    /// Number of nonzero coordinates.
    #[inline]
    pub fn weight(&self) -> u32 {
        (self.ones | self.twos).count_ones()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.ones | self.twos == 0
    }

    #[inline]
    pub fn support(&self) -> u64 {
        self.ones | self.twos
    }

    #[inline]
    pub fn neg(&self) -> Self {
        Self {
            len: self.len,
            ones: self.twos,
            twos: self.ones,
        }
    }

    #[inline]
    pub fn scale(&self, c: u8) -> Self {
        match c % 3 {
            0 => Self {
                len: self.len,
                ones: 0,
                twos: 0,
            },
            1 => *self,
            _ => self.neg(),
        }
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        let (ones, twos) = add_planes(self.ones, self.twos, other.ones, other.twos);
        Self {
            len: self.len,
            ones,
            twos,
        }
    }

    #[inline]
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> u8 {
        debug_assert_eq!(self.len, other.len);
        dot_planes(self.ones, self.twos, other.ones, other.twos)
    }

    /// Index of the first nonzero coordinate.
    pub fn leading(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| s.trailing_zeros() as usize)
    }

    /// Scales the vector so its first nonzero coordinate is 1.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            Some(j) if self.get(j) == 2 => self.neg(),
            _ => *self,
        }
    }

    /// Concatenates `self` and `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let len = self.len() + other.len();
        if len > MAX_LEN {
            return Err(Error::Param(format!("length {len} exceeds {MAX_LEN}")));
        }
        Ok(Self {
            len: len as u8,
            ones: self.ones | (other.ones << self.len()),
            twos: self.twos | (other.twos << self.len()),
        })
    }

    pub fn to_ternary_string(&self) -> String {
        (0..self.len())
            .map(|j| char::from(b'0' + self.get(j)))
            .collect()
    }
}

impl fmt::Debug for GF3Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF3Vector({})", self.to_ternary_string())
    }
}

impl fmt::Display for GF3Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ternary_string())
    }
}

/// A rectangular matrix over GF(3), stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF3Matrix {
    ncols: usize,
    rows: Vec<GF3Vector>,
}

impl GF3Matrix {
    pub fn new(ncols: usize, rows: Vec<GF3Vector>) -> Result<Self> {
        if ncols > MAX_LEN {
            return Err(Error::Param(format!("{ncols} columns exceeds {MAX_LEN}")));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {ncols} columns",
                r.len()
            )));
        }
        Ok(Self { ncols, rows })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Result<Self> {
        let z = GF3Vector::zero(ncols)?;
        Ok(Self {
            ncols,
            rows: vec![z; nrows],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let rows = (0..n).map(|i| GF3Vector::unit(n, i)).collect::<Result<_>>()?;
        Self::new(n, rows)
    }

    pub fn from_symbol_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| GF3Vector::from_symbols(r))
            .collect::<Result<_>>()?;
        Self::new(ncols, rows)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn rows(&self) -> &[GF3Vector] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &GF3Vector {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, s: u8) {
        self.rows[i].set(j, s);
    }

    pub fn transpose(&self) -> Result<Self> {
        let mut t = Self::zeros(self.ncols, self.nrows())?;
        for i in 0..self.nrows() {
            for j in 0..self.ncols {
                t.set(j, i, self.get(i, j));
            }
        }
        Ok(t)
    }

    pub fn scale(&self, c: u8) -> Self {
        Self {
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let ot = other.transpose()?;
        self.mul_transpose(&ot)
    }

    /// `self * other^T`, i.e. the matrix of row inner products.
    pub fn mul_transpose(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.ncols {
            return Err(Error::Dimension(format!(
                "row lengths {} and {} differ",
                self.ncols, other.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows(), other.nrows())?;
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                out.set(i, j, a.dot(b));
            }
        }
        Ok(out)
    }

    /// Places `right` to the right of `self`.
    pub fn hconcat(&self, right: &Self) -> Result<Self> {
        if self.nrows() != right.nrows() {
            return Err(Error::Dimension(format!(
                "row counts {} and {} differ",
                self.nrows(),
                right.nrows()
            )));
        }
        let rows = self
            .rows
            .iter()
            .zip(&right.rows)
            .map(|(a, b)| a.concat(b))
            .collect::<Result<_>>()?;
        Self::new(self.ncols + right.ncols, rows)
    }

    /// Places `below` under `self`.
    pub fn vconcat(&self, below: &Self) -> Result<Self> {
        if self.ncols != below.ncols {
            return Err(Error::Dimension(format!(
                "column counts {} and {} differ",
                self.ncols, below.ncols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&below.rows);
        Self::new(self.ncols, rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(GF3Vector::is_zero)
    }

    /// Reduced row echelon form with leftmost pivots; zero rows are dropped.
    pub fn row_reduce(&self) -> Self {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col) != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].normalized_at(col);
            rows[rank] = pivot;
            for i in 0..rows.len() {
                if i != rank {
                    let c = rows[i].get(col);
                    if c != 0 {
                        // c + (3 - c) = 0
                        rows[i] = rows[i].add(&pivot.scale(3 - c));
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        Self {
            ncols: self.ncols,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().nrows()
    }

    /// Pivot columns of a matrix already in reduced row echelon form.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().filter_map(GF3Vector::leading).collect()
    }

    /// Basis of `{x : x . r = 0 for every row r}`.
    pub fn null_space(&self) -> Result<Self> {
        let rref = self.row_reduce();
        let pivots = rref.pivot_columns();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut v = GF3Vector::zero(self.ncols)?;
            v.set(free, 1);
            for (r, &p) in rref.rows.iter().zip(&pivots) {
                // x_p + r_free * x_free = 0
                v.set(p, (3 - r.get(free)) % 3);
            }
            basis.push(v);
        }
        Self::new(self.ncols, basis)
    }

    /// Whether `v` lies in the row space of a matrix in reduced row echelon form.
    pub fn rref_contains(&self, v: &GF3Vector) -> bool {
        let mut x = *v;
        for r in &self.rows {
            let p = r.leading().expect("rref rows are nonzero");
            let c = x.get(p);
            if c != 0 {
                x = x.add(&r.scale(3 - c));
            }
        }
        x.is_zero()
    }
}

impl GF3Vector {
    /// Scales so that coordinate `col` (assumed nonzero) becomes 1.
    fn normalized_at(&self, col: usize) -> Self {
        if self.get(col) == 2 {
            self.neg()
        } else {
            *self
        }
    }
}

impl fmt::Debug for GF3Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF3Matrix {}x{} [", self.nrows(), self.ncols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// A monomial map over GF(3): coordinate `j` of the input, scaled by
/// `signs[j]`, lands on coordinate `perm[j]` of the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    perm: Vec<usize>,
    signs: Vec<u8>,
}

impl MonomialMap {
    pub fn new(perm: Vec<usize>, signs: Vec<u8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::Dimension(format!(
                "{} signs for a permutation of {n} points",
                signs.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Param("not a permutation".into()));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != 2) {
            return Err(Error::Param("monomial scalars must be 1 or 2".into()));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[u8] {
        &self.signs
    }

    pub fn apply(&self, x: &GF3Vector) -> Result<GF3Vector> {
        if x.len() != self.len() {
            return Err(Error::Dimension(format!(
                "map on {} coordinates applied to a vector of length {}",
                self.len(),
                x.len()
            )));
        }
        let mut y = GF3Vector::zero(x.len())?;
        for j in 0..x.len() {
            let s = x.get(j);
            if s != 0 {
                y.set(self.perm[j], s * self.signs[j] % 3);
            }
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Self {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            // units of GF(3) are their own inverses
            signs[self.perm[j]] = self.signs[j];
        }
        Self { perm, signs }
    }
}
