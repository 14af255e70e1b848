//! Canonical certificates for Hadamard matrices and ternary codes.
//!
//! Both objects are reduced to vertex-colored graphs whose isomorphisms are
//! exactly the equivalences of the objects, then labeled canonically.

mod graph;
mod group;
mod ir;

pub use graph::ColoredGraph;
pub use group::{group_order, Perm, StabilizerChain};
pub use ir::{canonical_form, canonical_form_with, CanonicalForm, CellInvariant, SearchStats};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::code::TernaryCode;
use crate::error::{Error, Result};
use crate::gf3::{GF3Matrix, GF3Vector};
use crate::hadamard::HadamardMatrix;
use crate::weight::{sweep, Sweep, SweepOptions, DEFAULT_BUDGET};

/// Ratio between the automorphism group of the Hadamard graph and the
/// reported `|Aut(H)|`. The graph group is isomorphic to the group of pairs
/// `(P, Q)` with `P H Q^T = H`, which already contains `(-I, -I)`, so no
/// factor is removed.
pub const HADAMARD_AUT_NORMALIZATION: u32 = 1;

/// Default limit on the number of codewords placed in a code graph.
pub const DEFAULT_MAX_WORDS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Graph,
    Hadamard,
    Code,
}

impl CertKind {
    fn tag(self) -> u8 {
        match self {
            CertKind::Graph => 0,
            CertKind::Hadamard => 1,
            CertKind::Code => 2,
        }
    }
}

/// Canonical certificate: equal certificates of the same kind mean
/// equivalent objects.
#[derive(Clone, Debug)]
pub struct CanonCert {
    pub kind: CertKind,
    pub bytes: Vec<u8>,
    /// Order of the automorphism group of the object.
    pub aut_order: BigUint,
    pub stats: SearchStats,
}

impl CanonCert {
    fn from_form(kind: CertKind, header: &[u32], form: &CanonicalForm, aut_order: BigUint) -> Self {
        let mut bytes = Vec::with_capacity(1 + 4 * (header.len() + form.encoding.len()));
        bytes.push(kind.tag());
        for x in header.iter().chain(&form.encoding) {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        Self {
            kind,
            bytes,
            aut_order,
            stats: form.stats,
        }
    }

    /// SHA-256 of the certificate bytes, lowercase hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

impl PartialEq for CanonCert {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.bytes == other.bytes
    }
}

impl Eq for CanonCert {}

impl fmt::Display for CanonCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}", self.kind, self.digest())
    }
}

pub fn graph_cert(g: &ColoredGraph) -> CanonCert {
    let form = canonical_form(g);
    let order = form.group_order();
    CanonCert::from_form(CertKind::Graph, &[g.len() as u32], &form, order)
}

/// Graph on `4n` vertices: `r_i^+`, `r_i^-` (ids `i`, `n + i`, color 0) and
/// `c_j^+`, `c_j^-` (ids `2n + j`, `3n + j`, color 1). `r_i^s` is joined to
/// `c_j^t` iff `s t = H_ij`, and each `±` pair is joined by an edge.
pub fn hadamard_graph(h: &HadamardMatrix) -> ColoredGraph {
    let n = h.order() as u32;
    let mut colors = vec![0; 2 * n as usize];
    colors.extend(std::iter::repeat(1).take(2 * n as usize));
    let mut g = ColoredGraph::new(colors);
    let (rp, rm, cp, cm) = (0, n, 2 * n, 3 * n);
    for i in 0..n {
        g.add_edge(rp + i, rm + i).expect("valid vertex ids");
        g.add_edge(cp + i, cm + i).expect("valid vertex ids");
        for j in 0..n {
            if h.get(i as usize, j as usize) == 1 {
                g.add_edge(rp + i, cp + j).expect("valid vertex ids");
                g.add_edge(rm + i, cm + j).expect("valid vertex ids");
            } else {
                g.add_edge(rp + i, cm + j).expect("valid vertex ids");
                g.add_edge(rm + i, cp + j).expect("valid vertex ids");
            }
        }
    }
    g
}

/// Histogram of `|sum_j h_aj h_bj h_cj h_dj|` over row quadruples `a < b <
/// c < d`; invariant under equivalence.
pub fn four_profile(h: &HadamardMatrix) -> BTreeMap<u32, u64> {
    let rows = h.rows();
    let n = rows.len();
    let mut hist = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            let ab = rows[a].minus_mask() ^ rows[b].minus_mask();
            for c in b + 1..n {
                let abc = ab ^ rows[c].minus_mask();
                for d in c + 1..n {
                    let m = (abc ^ rows[d].minus_mask()).count_ones() as i32;
                    let s = (n as i32 - 2 * m).unsigned_abs();
                    *hist.entry(s).or_insert(0) += 1;
                }
            }
        }
    }
    hist
}

/// For each row `a`, the histogram of `|sum_j h_aj h_bj h_cj h_dj|` over
/// triples `b < c < d` of other rows.
fn row_profiles(h: &HadamardMatrix) -> Vec<Vec<u32>> {
    let rows: Vec<u64> = h.rows().iter().map(|r| r.minus_mask()).collect();
    let n = rows.len();
    let mut out = vec![vec![0u32; n / 2 + 1]; n];
    for b in 0..n {
        for c in b + 1..n {
            let bc = rows[b] ^ rows[c];
            for d in c + 1..n {
                let bcd = bc ^ rows[d];
                for a in (0..n).filter(|&a| a != b && a != c && a != d) {
                    let m = (bcd ^ rows[a]).count_ones() as i32;
                    let s = (n as i32 - 2 * m).unsigned_abs() as usize;
                    out[a][s / 2] += 1;
                }
            }
        }
    }
    out
}

/// [`hadamard_graph`] with rows and columns colored by their 4-profiles.
/// The colors are equivalence invariants, so certificates stay exact.
pub fn hadamard_graph_colored(h: &HadamardMatrix) -> ColoredGraph {
    let n = h.order();
    let rp = row_profiles(h);
    let cp = row_profiles(&h.transpose());
    let mut keys: Vec<(u8, &Vec<u32>)> = rp.iter().map(|p| (0, p)).chain(cp.iter().map(|p| (1, p))).collect();
    keys.sort();
    keys.dedup();
    let color = |kind: u8, p: &Vec<u32>| keys.binary_search(&(kind, p)).expect("known key") as u32;
    let mut colors = Vec::with_capacity(4 * n);
    for _ in 0..2 {
        colors.extend(rp.iter().map(|p| color(0, p)));
    }
    for _ in 0..2 {
        colors.extend(cp.iter().map(|p| color(1, p)));
    }
    let plain = hadamard_graph(h);
    let mut g = ColoredGraph::new(colors);
    for v in 0..plain.len() as u32 {
        for &u in plain.neighbors(v) {
            if u > v {
                g.add_edge(v, u).expect("valid vertex ids");
            }
        }
    }
    g
}

/// Quadruple profiles relative to the first individualized rows (or
/// columns) of a Hadamard graph.
struct QuadrupleInvariant {
    n: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl QuadrupleInvariant {
    fn new(h: &HadamardMatrix) -> Self {
        Self {
            n: h.order(),
            rows: h.rows().iter().map(|r| r.minus_mask()).collect(),
            cols: h.transpose().rows().iter().map(|r| r.minus_mask()).collect(),
        }
    }
}

impl CellInvariant for QuadrupleInvariant {
    fn value(&self, v: u32, singletons: &[u32]) -> u64 {
        let n = self.n;
        let v = v as usize;
        let (lines, kind) = if v < 2 * n { (&self.rows, 0) } else { (&self.cols, 1) };
        let a = v % n;
        let mut fixed: Vec<usize> = Vec::with_capacity(2);
        for &u in singletons {
            let u = u as usize;
            if (u >= 2 * n) as usize == kind {
                let line = u % n;
                if line != a && !fixed.contains(&line) {
                    fixed.push(line);
                    if fixed.len() == 2 {
                        break;
                    }
                }
            }
        }
        let sum = |m: u64| (n as i32 - 2 * m.count_ones() as i32).unsigned_abs() as usize / 2;
        let mut hist = vec![0u32; n / 2 + 1];
        match fixed[..] {
            [] => return 0,
            [b] => {
                let ab = lines[a] ^ lines[b];
                for c in (0..n).filter(|&c| c != a && c != b) {
                    for d in (c + 1..n).filter(|&d| d != a && d != b) {
                        hist[sum(ab ^ lines[c] ^ lines[d])] += 1;
                    }
                }
            }
            [b, c, ..] => {
                let abc = lines[a] ^ lines[b] ^ lines[c];
                for d in (0..n).filter(|&d| d != a && d != b && d != c) {
                    hist[sum(abc ^ lines[d])] += 1;
                }
            }
        }
        let mut x = fixed.len() as u64;
        for c in hist {
            x = x.wrapping_mul(0x100_0000_01b3) ^ c as u64;
        }
        x
    }
}

pub fn hadamard_cert(h: &HadamardMatrix) -> CanonCert {
    let inv = QuadrupleInvariant::new(h);
    let form = canonical_form_with(&hadamard_graph_colored(h), Some(&inv));
    let order = form.group_order() / BigUint::from(HADAMARD_AUT_NORMALIZATION);
    CanonCert::from_form(CertKind::Hadamard, &[h.order() as u32], &form, order)
}

/// `|Aut(H)|`: pairs of signed permutation matrices `(P, Q)` with
/// `P H Q^T = H`.
pub fn hadamard_aut_order(h: &HadamardMatrix) -> BigUint {
    hadamard_cert(h).aut_order
}

/// Equivalence under row and column permutations and negations.
pub fn hadamard_equivalent(a: &HadamardMatrix, b: &HadamardMatrix) -> bool {
    if a.order() != b.order() {
        return false;
    }
    if four_profile(a) != four_profile(b) || four_profile(&a.transpose()) != four_profile(&b.transpose()) {
        return false;
    }
    hadamard_cert(a) == hadamard_cert(b)
}

/// Options for code certificates.
#[derive(Clone, Debug)]
pub struct CodeCertOptions {
    /// Codeword budget for the enumeration sweep.
    pub budget: u128,
    /// Largest number of codewords placed in the graph.
    pub max_words: usize,
}

impl Default for CodeCertOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            max_words: DEFAULT_MAX_WORDS,
        }
    }
}

/// Weight classes used for the graph of a code: nonzero classes ordered by
/// `(A_w, w)`, taken until their words span the code.
fn select_classes(
    code: &TernaryCode,
    sweep_result: &Sweep,
    opts: &CodeCertOptions,
) -> Result<(Vec<usize>, Vec<GF3Vector>)> {
    let n = code.n();
    let mut order: Vec<(u64, usize)> = sweep_result
        .enumerator
        .support()
        .filter(|&(w, _)| w > 0)
        .map(|(w, c)| (c, w))
        .collect();
    order.sort_unstable();

    let mut weights = Vec::new();
    let mut words: Vec<GF3Vector> = Vec::new();
    let mut span = GF3Matrix::zeros(0, n)?;
    for (count, w) in order {
        if span.rank() == code.k() {
            break;
        }
        let total = words.len() as u64 + count;
        if total > opts.max_words as u64 {
            return Err(Error::Budget {
                needed: total as u128,
                budget: opts.max_words as u128,
            });
        }
        let class = match sweep_result.words.get(&w) {
            Some(list) => list.clone(),
            None => sweep(code, &SweepOptions::collecting(&[w]).with_budget(opts.budget))?
                .words
                .remove(&w)
                .unwrap_or_default(),
        };
        let normal: Vec<GF3Vector> = class.into_iter().filter(|v| v.normalized() == *v).collect();
        let mut rows = span.rows().to_vec();
        rows.extend_from_slice(&normal);
        span = GF3Matrix::new(n, rows)?.row_reduce();
        words.extend(normal);
        weights.push(w);
    }
    if span.rank() != code.k() {
        return Err(Error::Internal("codewords do not span the code".into()));
    }
    Ok((weights, words))
}

/// Coordinate vertices `(i, 1)`, `(i, 2)` (ids `2i`, `2i + 1`, color 0) and
/// word vertices `x`, `2x` (color `1 + wt(x)`) for every normalized word
/// `x`; `x` is adjacent to `(i, x_i)` on its support, and both kinds of
/// vertices come in matched pairs.
pub fn code_graph(n: usize, words: &[GF3Vector]) -> ColoredGraph {
    let mut colors = vec![0; 2 * n];
    for w in words {
        let c = 1 + w.weight();
        colors.push(c);
        colors.push(c);
    }
    let mut g = ColoredGraph::new(colors);
    for i in 0..n as u32 {
        g.add_edge(2 * i, 2 * i + 1).expect("valid vertex ids");
    }
    for (t, w) in words.iter().enumerate() {
        let x = (2 * n + 2 * t) as u32;
        g.add_edge(x, x + 1).expect("valid vertex ids");
        for i in 0..n {
            let s = w.get(i) as u32;
            if s != 0 {
                let i = i as u32;
                g.add_edge(x, 2 * i + s - 1).expect("valid vertex ids");
                // 2x has the other symbol
                g.add_edge(x + 1, 2 * i + 2 - s).expect("valid vertex ids");
            }
        }
    }
    g
}

/// Certificate of a code up to monomial equivalence, using the codewords
/// already collected in `sweep_result` where possible.
pub fn code_cert_from_sweep(
    code: &TernaryCode,
    sweep_result: &Sweep,
    opts: &CodeCertOptions,
) -> Result<CanonCert> {
    let (weights, words) = select_classes(code, sweep_result, opts)?;
    let g = code_graph(code.n(), &words);
    let form = canonical_form(&g);
    let order = form.group_order();
    let mut header = vec![code.n() as u32, code.k() as u32, weights.len() as u32];
    header.extend(weights.iter().map(|&w| w as u32));
    Ok(CanonCert::from_form(CertKind::Code, &header, &form, order))
}

/// Sweep options that collect every weight class small enough for a graph.
pub fn cert_sweep_options(opts: &CodeCertOptions) -> SweepOptions {
    SweepOptions::collecting(&(1..=crate::gf3::MAX_LEN).collect::<Vec<_>>())
        .with_budget(opts.budget)
        .with_cap(opts.max_words)
}

/// Certificate of a code up to monomial equivalence. The automorphism
/// order counts monomial maps, scalar `-1` included.
pub fn code_cert(code: &TernaryCode, opts: &CodeCertOptions) -> Result<CanonCert> {
    let s = sweep(code, &cert_sweep_options(opts))?;
    code_cert_from_sweep(code, &s, opts)
}

/// Monomial equivalence of two codes; weight enumerators are compared first.
pub fn code_equivalent(a: &TernaryCode, b: &TernaryCode, opts: &CodeCertOptions) -> Result<bool> {
    if a.n() != b.n() || a.k() != b.k() {
        return Ok(false);
    }
    let sa = sweep(a, &cert_sweep_options(opts))?;
    let sb = sweep(b, &cert_sweep_options(opts))?;
    if sa.enumerator != sb.enumerator {
        return Ok(false);
    }
    Ok(code_cert_from_sweep(a, &sa, opts)? == code_cert_from_sweep(b, &sb, opts)?)
}
