//! Hadamard matrices among the full-weight codewords of a ternary code.
//!
//! Full-weight codewords with first coordinate 1 are lifted to ±1 vectors
//! and split by the parity of their number of +1 entries; two orthogonal
//! ±1 vectors of length divisible by 4 always share that parity. Each part
//! gets an orthogonality graph, and its `n`-cliques are the Hadamard
//! matrices whose rows are codewords.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clique::{build_gamma, find_cliques, OrthGraph};
use super::{HadamardMatrix, SignVector};
use crate::canonical::{hadamard_cert, CanonCert};
use crate::code::{Family, TernaryCode};
use crate::error::{Error, Result};
use crate::gf3::{GF3Matrix, GF3Vector};
use crate::weight::{sweep, SweepOptions};

/// `1 -> +1`, `2 -> -1`; defined on full-weight vectors only.
pub fn lift_bar(x: &GF3Vector) -> Result<SignVector> {
    if x.weight() as usize != x.len() {
        return Err(Error::Param(format!(
            "vector {x} has a zero coordinate and cannot be lifted"
        )));
    }
    let (_, twos) = x.planes();
    SignVector::from_minus_mask(x.len(), twos)
}

/// Keeps the word of each pair `{x, 2x}` starting with 1, lifts it, and
/// splits by the parity of the number of +1 entries. Both parts are sorted
/// and free of duplicates.
pub fn build_w1(words: &[GF3Vector]) -> Result<(Vec<SignVector>, Vec<SignVector>)> {
    let mut w10 = Vec::new();
    let mut w11 = Vec::new();
    for x in words {
        match x.get(0) {
            0 => {
                return Err(Error::Param(format!(
                    "word {x} has first coordinate 0"
                )))
            }
            1 => {
                let v = lift_bar(x)?;
                if v.n_plus() % 2 == 0 {
                    w10.push(v);
                } else {
                    w11.push(v);
                }
            }
            _ => {}
        }
    }
    for part in [&mut w10, &mut w11] {
        part.sort_unstable();
        part.dedup();
    }
    Ok((w10, w11))
}

/// Whether `r1 . r2 = 0` implies equal parity of the +1 counts for this
/// pair. Meaningful for lengths divisible by 4.
pub fn orthogonality_parity(r1: &SignVector, r2: &SignVector) -> bool {
    r1.dot(r2) != 0 || r1.n_plus() % 2 == r2.n_plus() % 2
}

/// Cliques of size equal to the vector length.
pub fn find_36_cliques(g: &OrthGraph) -> Vec<Vec<usize>> {
    let Some(first) = g.vertices().first() else {
        return Vec::new();
    };
    let k = first.len();
    if g.len() < k {
        return Vec::new();
    }
    find_cliques(g, k)
}

/// Rows sorted lexicographically (+1 before -1), then verified.
pub fn assemble_hadamard(rows: &[SignVector]) -> Result<HadamardMatrix> {
    let mut rows = rows.to_vec();
    rows.sort_unstable();
    let h = HadamardMatrix::new(rows)
        .map_err(|e| Error::Internal(format!("clique is not a Hadamard matrix: {e}")))?;
    if !h.verify() {
        return Err(Error::Internal("H H^T != nI for an assembled clique".into()));
    }
    Ok(h)
}

/// `(|W10|, |W11|, N0, N1, N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchTuple {
    pub w10: usize,
    pub w11: usize,
    pub n0: usize,
    pub n1: usize,
    pub neq: usize,
}

impl fmt::Display for SearchTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.w10, self.w11, self.n0, self.n1, self.neq
        )
    }
}

impl std::str::FromStr for SearchTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let nums: Vec<usize> = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad tuple {s:?}: {e}")))?;
        match nums[..] {
            [w10, w11, n0, n1, neq] => Ok(Self {
                w10,
                w11,
                n0,
                n1,
                neq,
            }),
            _ => Err(Error::Parse(format!("tuple {s:?} does not have 5 entries"))),
        }
    }
}

/// A matrix found as a clique.
#[derive(Clone, Debug)]
pub struct FoundMatrix {
    /// Which graph the clique came from (0 or 1).
    pub parity: u8,
    /// Vertex indices into `W10` or `W11`.
    pub clique: Vec<usize>,
    pub matrix: HadamardMatrix,
    /// Index into [`SearchOutcome::classes`].
    pub class: usize,
}

/// One equivalence class among the found matrices.
#[derive(Clone, Debug)]
pub struct HadamardClass {
    /// Index of the first member in [`SearchOutcome::matrices`].
    pub representative: usize,
    pub members: Vec<usize>,
    pub cert: CanonCert,
}

impl HadamardClass {
    pub fn aut_order(&self) -> &BigUint {
        &self.cert.aut_order
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub tuple: SearchTuple,
    pub w10: Vec<SignVector>,
    pub w11: Vec<SignVector>,
    /// Cliques of the first graph, then of the second, each in sorted order.
    pub matrices: Vec<FoundMatrix>,
    /// Classes in order of first appearance.
    pub classes: Vec<HadamardClass>,
}

fn cliques_of(part: &[SignVector], n: usize) -> Vec<Vec<usize>> {
    // a part with fewer than n vectors cannot hold n rows
    if part.len() < n {
        return Vec::new();
    }
    find_36_cliques(&build_gamma(part))
}

/// Runs the search on a list of full-weight codewords of length `n`.
pub fn search_words(words: &[GF3Vector]) -> Result<SearchOutcome> {
    let (w10, w11) = build_w1(words)?;
    let n = words.first().map_or(0, GF3Vector::len);
    let c0 = cliques_of(&w10, n);
    let c1 = cliques_of(&w11, n);
    let (n0, n1) = (c0.len(), c1.len());

    let mut found = Vec::with_capacity(n0 + n1);
    for (parity, part, cliques) in [(0u8, &w10, c0), (1u8, &w11, c1)] {
        for clique in cliques {
            let rows: Vec<SignVector> = clique.iter().map(|&i| part[i]).collect();
            found.push((parity, clique, assemble_hadamard(&rows)?));
        }
    }
    let certs: Vec<CanonCert> = found.par_iter().map(|(_, _, h)| hadamard_cert(h)).collect();

    let mut classes: Vec<HadamardClass> = Vec::new();
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut matrices = Vec::with_capacity(found.len());
    for (i, ((parity, clique, matrix), cert)) in found.into_iter().zip(certs).enumerate() {
        let class = *index.entry(cert.bytes.clone()).or_insert_with(|| {
            classes.push(HadamardClass {
                representative: i,
                members: Vec::new(),
                cert,
            });
            classes.len() - 1
        });
        classes[class].members.push(i);
        matrices.push(FoundMatrix {
            parity,
            clique,
            matrix,
            class,
        });
    }
    Ok(SearchOutcome {
        tuple: SearchTuple {
            w10: w10.len(),
            w11: w11.len(),
            n0,
            n1,
            neq: classes.len(),
        },
        w10,
        w11,
        matrices,
        classes,
    })
}

/// Enumerates the full-weight codewords of `code` and runs the search.
pub fn search_code(code: &TernaryCode, budget: u128) -> Result<SearchOutcome> {
    let n = code.n();
    let s = sweep(code, &SweepOptions::collecting(&[n]).with_budget(budget))?;
    search_words(s.words_of_weight(n))
}

/// The row space over GF(3) of a Hadamard matrix, with `+1 -> 1`, `-1 -> 2`.
pub fn code_from_hadamard(h: &HadamardMatrix) -> Result<TernaryCode> {
    let n = h.order();
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let rows = h
        .rows()
        .iter()
        .map(|r| GF3Vector::from_planes(n, !r.minus_mask() & mask, r.minus_mask()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TernaryCode::from_generator(
        GF3Matrix::new(n, rows)?,
        Family::Hadamard,
        "C(H)",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_examples() {
        let ones = GF3Vector::from_ternary_str("1111").unwrap();
        assert_eq!(lift_bar(&ones).unwrap().entries(), vec![1, 1, 1, 1]);
        let x = GF3Vector::from_ternary_str("1212").unwrap();
        assert_eq!(lift_bar(&x).unwrap().entries(), vec![1, -1, 1, -1]);
        assert_eq!(lift_bar(&x.scale(2)).unwrap(), lift_bar(&x).unwrap().neg());
        assert!(lift_bar(&GF3Vector::from_ternary_str("1210").unwrap()).is_err());
    }

    #[test]
    fn w1_keeps_one_of_each_pair() {
        let x = GF3Vector::from_ternary_str("1211").unwrap();
        let (a, b) = build_w1(&[x, x.scale(2)]).unwrap();
        assert_eq!(a.len() + b.len(), 1);
        assert!(build_w1(&[GF3Vector::from_ternary_str("0111").unwrap()]).is_err());
    }

    #[test]
    fn orthogonal_pairs_share_parity_at_length_4() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                let r1 = SignVector::from_minus_mask(4, a).unwrap();
                let r2 = SignVector::from_minus_mask(4, b).unwrap();
                if r1 != r2 && r1 != r2.neg() {
                    assert!(orthogonality_parity(&r1, &r2));
                }
            }
        }
    }

    #[test]
    fn order_two_assembly() {
        let rows = [
            SignVector::from_entries(&[1, -1]).unwrap(),
            SignVector::from_entries(&[1, 1]).unwrap(),
        ];
        let h = assemble_hadamard(&rows).unwrap();
        assert_eq!(h.rows()[0].entries(), vec![1, 1]);
        assert!(assemble_hadamard(&[rows[0], rows[0]]).is_err());
    }

    #[test]
    fn tuple_text_round_trip() {
        let t: SearchTuple = "(84, 252, 0, 19, 3)".parse().unwrap();
        assert_eq!(t.to_string().parse::<SearchTuple>().unwrap(), t);
        assert!("(1, 2)".parse::<SearchTuple>().is_err());
    }

    #[test]
    fn order_four_code() {
        let h = HadamardMatrix::sylvester(2).unwrap();
        let c = code_from_hadamard(&h).unwrap();
        let rank = GF3Matrix::from_symbol_rows(&[
            vec![1, 1, 1, 1],
            vec![1, 2, 1, 2],
            vec![1, 1, 2, 2],
            vec![1, 2, 2, 1],
        ])
        .unwrap()
        .rank();
        assert_eq!(c.k(), rank);
        assert!(c.k() <= 4);
    }
}
