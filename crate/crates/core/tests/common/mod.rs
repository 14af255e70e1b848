//! Helpers shared by the integration tests: seeded randomness, random
//! equivalences, and brute-force reference answers for small objects.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdcodes::code::{Family, TernaryCode};
use sdcodes::gf3::{GF3Matrix, GF3Vector, MonomialMap};
use sdcodes::hadamard::HadamardMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_signs(n: usize, rng: &mut impl Rng) -> Vec<i8> {
    (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
}

/// `P H Q` for random signed permutations `P`, `Q`.
pub fn perturb_hadamard(h: &HadamardMatrix, rng: &mut impl Rng) -> HadamardMatrix {
    let n = h.order();
    h.permuted(
        &random_perm(n, rng),
        &random_signs(n, rng),
        &random_perm(n, rng),
        &random_signs(n, rng),
    )
    .unwrap()
}

pub fn random_monomial(n: usize, rng: &mut impl Rng) -> MonomialMap {
    let signs = (0..n).map(|_| rng.gen_range(1..=2u8)).collect();
    MonomialMap::new(random_perm(n, rng), signs).unwrap()
}

/// Random `k x n` generator over GF(3) with an identity prefix, so the
/// code has dimension exactly `k`.
pub fn random_systematic_code(k: usize, n: usize, rng: &mut impl Rng) -> TernaryCode {
    let rows: Vec<Vec<u8>> = (0..k)
        .map(|i| {
            (0..n)
                .map(|j| if j < k { u8::from(i == j) } else { rng.gen_range(0..3) })
                .collect()
        })
        .collect();
    TernaryCode::from_generator(GF3Matrix::from_symbol_rows(&rows).unwrap(), Family::Other, "random")
}

/// Every codeword, as symbol vectors, by plain integer arithmetic.
pub fn all_codewords(code: &TernaryCode) -> Vec<Vec<u8>> {
    let g: Vec<Vec<u8>> = code.generator().rows().iter().map(GF3Vector::symbols).collect();
    let (k, n) = (g.len(), code.n());
    let mut out = Vec::with_capacity(3usize.pow(k as u32));
    for mut m in 0..3usize.pow(k as u32) {
        let mut w = vec![0u32; n];
        for row in &g {
            let c = (m % 3) as u32;
            m /= 3;
            for (x, &y) in w.iter_mut().zip(row) {
                *x += c * u32::from(y);
            }
        }
        out.push(w.into_iter().map(|x| (x % 3) as u8).collect());
    }
    out
}

fn for_each_signed_perm(n: usize, mut f: impl FnMut(&[usize], &[i8])) {
    let mut perms = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(p) = stack.pop() {
        if p.len() == n {
            perms.push(p);
            continue;
        }
        for x in 0..n {
            if !p.contains(&x) {
                let mut q = p.clone();
                q.push(x);
                stack.push(q);
            }
        }
    }
    for p in &perms {
        for mask in 0..1u32 << n {
            let s: Vec<i8> = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            f(p, &s);
        }
    }
}

fn all_signed_perms(n: usize) -> Vec<(Vec<usize>, Vec<i8>)> {
    let mut v = Vec::new();
    for_each_signed_perm(n, |p, s| v.push((p.to_vec(), s.to_vec())));
    v
}

/// Smallest entry table over all `P H Q`, the brute-force canonical form.
pub fn brute_hadamard_form(h: &HadamardMatrix) -> Vec<Vec<i8>> {
    let n = h.order();
    let sp = all_signed_perms(n);
    let e = h.entries();
    let mut best: Option<Vec<Vec<i8>>> = None;
    for (rp, rs) in &sp {
        for (cp, cs) in &sp {
            let m: Vec<Vec<i8>> = (0..n)
                .map(|i| (0..n).map(|j| rs[i] * cs[j] * e[rp[i]][cp[j]]).collect())
                .collect();
            if best.as_ref().map_or(true, |b| m < *b) {
                best = Some(m);
            }
        }
    }
    best.unwrap()
}

/// Number of pairs `(P, Q)` with `P H Q = H`.
pub fn brute_hadamard_aut(h: &HadamardMatrix) -> u64 {
    let n = h.order();
    let sp = all_signed_perms(n);
    let e = h.entries();
    let mut count = 0;
    for (rp, rs) in &sp {
        for (cp, cs) in &sp {
            if (0..n).all(|i| (0..n).all(|j| rs[i] * cs[j] * e[rp[i]][cp[j]] == e[i][j])) {
                count += 1;
            }
        }
    }
    count
}

/// All Hadamard matrices of order 4, by exhaustion over `2^16` sign tables.
pub fn all_hadamard_4() -> Vec<HadamardMatrix> {
    (0..1u32 << 16)
        .filter_map(|m| {
            let rows: Vec<Vec<i8>> = (0..4)
                .map(|i| (0..4).map(|j| if m >> (4 * i + j) & 1 == 1 { -1 } else { 1 }).collect())
                .collect();
            HadamardMatrix::from_entries(&rows).ok()
        })
        .collect()
}

/// Smallest sorted codeword list over all monomial images of the code.
pub fn brute_code_form(code: &TernaryCode) -> Vec<Vec<u8>> {
    let n = code.n();
    let words = all_codewords(code);
    let mut best: Option<Vec<Vec<u8>>> = None;
    for_each_signed_perm(n, |p, s| {
        let mut img: Vec<Vec<u8>> = words
            .iter()
            .map(|w| {
                (0..n)
                    .map(|j| {
                        let x = w[p[j]];
                        if s[j] < 0 {
                            (3 - x) % 3
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        img.sort();
        if best.as_ref().map_or(true, |b| img < *b) {
            best = Some(img);
        }
    });
    best.unwrap()
}

/// Number of distinct entries of `v`.
pub fn distinct<T: Ord + Clone>(v: &[T]) -> usize {
    v.iter().cloned().collect::<BTreeSet<_>>().len()
}
