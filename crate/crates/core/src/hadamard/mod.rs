//! ±1 vectors, Hadamard matrices, and the search for Hadamard matrices among
//! the full-weight codewords of a ternary code.

mod clique;
mod io;
mod search;

pub use clique::{build_gamma, find_cliques, maximal_cliques, Bitset, OrthGraph};
pub use io::{format_hadamard, parse_hadamard_file, ParsedMatrix};
pub use search::{
    assemble_hadamard, build_w1, code_from_hadamard, find_36_cliques, lift_bar, FoundMatrix, HadamardClass,
    orthogonality_parity, search_code, search_words, SearchOutcome, SearchTuple,
};

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest order handled; rows are packed into one machine word.
pub const MAX_ORDER: usize = 64;

/// A vector in `{+1, -1}^n`. Bit `j` of `minus` is set iff entry `j` is -1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    len: u8,
    minus: u64,
}

impl SignVector {
    pub fn from_minus_mask(len: usize, minus: u64) -> Result<Self> {
        if len > MAX_ORDER {
            return Err(Error::Param(format!("length {len} exceeds {MAX_ORDER}")));
        }
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Ok(Self {
            len: len as u8,
            minus: minus & mask,
        })
    }

    pub fn from_entries(entries: &[i8]) -> Result<Self> {
        let mut minus = 0u64;
        for (j, &e) in entries.iter().enumerate() {
            match e {
                1 => {}
                -1 => minus |= 1 << j,
                _ => return Err(Error::Param(format!("entry {e} is not ±1"))),
            }
        }
        Self::from_minus_mask(entries.len(), minus)
    }

    pub fn all_plus(len: usize) -> Result<Self> {
        Self::from_minus_mask(len, 0)
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
    pub fn minus_mask(&self) -> u64 {
        self.minus
    }

    #[inline]
    pub fn get(&self, j: usize) -> i8 {
        if (self.minus >> j) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn entries(&self) -> Vec<i8> {
        (0..self.len()).map(|j| self.get(j)).collect()
    }

    /// Number of +1 entries.
    #[inline]
    pub fn n_plus(&self) -> usize {
        self.len() - self.minus.count_ones() as usize
    }

    /// Integer inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> i32 {
        debug_assert_eq!(self.len, other.len);
        self.len as i32 - 2 * (self.minus ^ other.minus).count_ones() as i32
    }

    #[inline]
    pub fn neg(&self) -> Self {
        let mask = if self.len == 64 { u64::MAX } else { (1u64 << self.len) - 1 };
        Self {
            len: self.len,
            minus: !self.minus & mask,
        }
    }

    /// Sort key: entries compared left to right with +1 before -1.
    #[inline]
    fn lex_key(&self) -> u64 {
        self.minus.reverse_bits()
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len())
            .map(|j| if self.get(j) == 1 { '+' } else { '-' })
            .collect();
        write!(f, "SignVector({s})")
    }
}

/// An `n x n` matrix of ±1 entries with `H H^T = n I`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    rows: Vec<SignVector>,
}

impl HadamardMatrix {
    /// Checks orthogonality before accepting the rows.
    pub fn new(rows: Vec<SignVector>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {n} rows",
                r.len()
            )));
        }
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate().skip(i + 1) {
                let d = a.dot(b);
                if d != 0 {
                    return Err(Error::Param(format!(
                        "rows {i} and {j} have inner product {d}"
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn from_entries(rows: &[Vec<i8>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| SignVector::from_entries(r))
                .collect::<Result<_>>()?,
        )
    }

    /// Sylvester matrix of order `2^m`.
    pub fn sylvester(m: u32) -> Result<Self> {
        let n = 1usize << m;
        let rows = (0..n)
            .map(|i| {
                let minus = (0..n).fold(0u64, |acc, j| {
                    acc | ((((i & j).count_ones() & 1) as u64) << j)
                });
                SignVector::from_minus_mask(n, minus)
            })
            .collect::<Result<_>>()?;
        Self::new(rows)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn rows(&self) -> &[SignVector] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.rows[i].get(j)
    }

    /// `H H^T == n I`, recomputed.
    pub fn verify(&self) -> bool {
        let n = self.order() as i32;
        self.rows.iter().enumerate().all(|(i, a)| {
            self.rows
                .iter()
                .enumerate()
                .all(|(j, b)| a.dot(b) == if i == j { n } else { 0 })
        })
    }

    pub fn transpose(&self) -> Self {
        let n = self.order();
        let rows = (0..n)
            .map(|j| {
                let minus = (0..n).fold(0u64, |acc, i| {
                    acc | (((self.rows[i].minus >> j) & 1) << i)
                });
                SignVector {
                    len: n as u8,
                    minus,
                }
            })
            .collect();
        Self { rows }
    }

    /// Applies signed permutations: row `i` of the result is
    /// `row_signs[i] * H[row_perm[i]]`, and likewise for columns.
    pub fn permuted(
        &self,
        row_perm: &[usize],
        row_signs: &[i8],
        col_perm: &[usize],
        col_signs: &[i8],
    ) -> Result<Self> {
        let n = self.order();
        let rows = (0..n)
            .map(|i| {
                let src = &self.rows[row_perm[i]];
                let entries: Vec<i8> = (0..n)
                    .map(|j| row_signs[i] * col_signs[j] * src.get(col_perm[j]))
                    .collect();
                SignVector::from_entries(&entries)
            })
            .collect::<Result<_>>()?;
        Self::new(rows)
    }

    pub fn entries(&self) -> Vec<Vec<i8>> {
        self.rows.iter().map(SignVector::entries).collect()
    }
}

impl fmt::Debug for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HadamardMatrix({}) [", self.order())?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_vector_basics() {
        let v = SignVector::from_entries(&[1, -1, 1, -1]).unwrap();
        assert_eq!(v.n_plus(), 2);
        assert_eq!(v.dot(&v), 4);
        assert_eq!(v.dot(&v.neg()), -4);
        assert_eq!(v.neg().entries(), vec![-1, 1, -1, 1]);
        assert!(SignVector::from_entries(&[1, 0]).is_err());
    }

    #[test]
    fn sylvester_is_hadamard() {
        for m in 0..=5 {
            let h = HadamardMatrix::sylvester(m).unwrap();
            assert!(h.verify());
            assert!(h.transpose().verify());
        }
        assert!(HadamardMatrix::from_entries(&[vec![1, 1], vec![1, 1]]).is_err());
        let h2 = HadamardMatrix::from_entries(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(h2.order(), 2);
    }

    #[test]
    fn lexicographic_order_puts_plus_first() {
        let a = SignVector::from_entries(&[1, -1, -1]).unwrap();
        let b = SignVector::from_entries(&[-1, 1, 1]).unwrap();
        assert!(a < b);
    }
}
