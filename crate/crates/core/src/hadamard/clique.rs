//! Orthogonality graphs on ±1 vectors and exact clique enumeration.

use rayon::prelude::*;

use super::SignVector;

/// Fixed-capacity bitset over vertex indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut b = Self::new(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    #[inline]
    pub fn and_not(&self, other: &Self) -> Self {
        Self {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    #[inline]
    pub fn and_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * 64 + w.trailing_zeros() as usize)
    }
}

/// Simple undirected graph on ±1 vectors; `x ~ y` iff `x . y = 0`.
#[derive(Clone, Debug)]
pub struct OrthGraph {
    vertices: Vec<SignVector>,
    adjacency: Vec<Bitset>,
}

impl OrthGraph {
    pub fn vertices(&self) -> &[SignVector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &Bitset {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bitset::len).sum::<usize>() / 2
    }
}

/// Builds the orthogonality graph; adjacency is the integer inner product.
pub fn build_gamma(vertices: &[SignVector]) -> OrthGraph {
    let n = vertices.len();
    let adjacency = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut row = Bitset::new(n);
            for v in 0..n {
                if u != v && vertices[u].dot(&vertices[v]) == 0 {
                    row.insert(v);
                }
            }
            row
        })
        .collect();
    OrthGraph {
        vertices: vertices.to_vec(),
        adjacency,
    }
}

/// Vertices that can lie in a `k`-clique: the `(k - 1)`-core.
fn core(g: &OrthGraph, k: usize) -> Bitset {
    let n = g.len();
    let mut alive = Bitset::full(n);
    let need = k.saturating_sub(1);
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..n {
            if alive.contains(u) && g.adjacency[u].and_len(&alive) < need {
                alive.remove(u);
                changed = true;
            }
        }
    }
    alive
}

/// Greedy coloring of `cand`: vertices in color-class order with their
/// color numbers (1-based). The number of colors bounds the clique size.
fn greedy_coloring(g: &OrthGraph, cand: &Bitset) -> Vec<(usize, usize)> {
    let mut uncolored = cand.clone();
    let mut out = Vec::with_capacity(cand.len());
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q = q.and_not(&g.adjacency[v]);
            uncolored.remove(v);
            out.push((v, color));
        }
    }
    out
}

fn extend(
    g: &OrthGraph,
    k: usize,
    clique: &mut Vec<usize>,
    mut cand: Bitset,
    out: &mut Vec<Vec<usize>>,
) {
    if clique.len() == k {
        out.push(clique.clone());
        return;
    }
    let need = k - clique.len();
    if cand.len() < need {
        return;
    }
    // Branch on vertices of the highest colors first; once the color of the
    // next vertex is below `need`, the remaining candidates cannot hold the
    // missing vertices.
    let colored = greedy_coloring(g, &cand);
    for &(v, color) in colored.iter().rev() {
        if color < need {
            return;
        }
        let next = cand.and(&g.adjacency[v]);
        clique.push(v);
        extend(g, k, clique, next, out);
        clique.pop();
        cand.remove(v);
    }
}

/// All `k`-cliques, each once as a sorted vertex list, in lexicographic order.
///
/// Each root takes only later vertices as candidates, so every clique is
/// produced from its smallest member. Below the root, branches are cut by a
/// greedy coloring bound.
pub fn find_cliques(g: &OrthGraph, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let alive = core(g, k);
    let roots: Vec<usize> = alive.iter().collect();
    let mut cliques: Vec<Vec<usize>> = roots
        .par_iter()
        .map(|&v| {
            let mut later = alive.clone();
            for u in alive.iter().take_while(|&u| u <= v) {
                later.remove(u);
            }
            let mut out = Vec::new();
            let mut clique = vec![v];
            extend(g, k, &mut clique, later.and(&g.adjacency[v]), &mut out);
            for c in &mut out {
                c.sort_unstable();
            }
            out
        })
        .flatten()
        .collect();
    cliques.sort();
    cliques
}

/// All maximal cliques (Bron–Kerbosch with pivoting), each sorted.
pub fn maximal_cliques(g: &OrthGraph) -> Vec<Vec<usize>> {
    fn bk(
        g: &OrthGraph,
        r: &mut Vec<usize>,
        p: Bitset,
        x: Bitset,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        // pivot maximizing |P ∩ N(u)| over P ∪ X
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.and_len(&g.adjacency[u]), std::cmp::Reverse(u)))
            .expect("P is nonempty");
        let mut p = p;
        let mut x = x;
        for v in p.and_not(&g.adjacency[pivot]).iter().collect::<Vec<_>>() {
            r.push(v);
            bk(g, r, p.and(&g.adjacency[v]), x.and(&g.adjacency[v]), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let n = g.len();
    let mut out = Vec::new();
    if n > 0 {
        bk(g, &mut Vec::new(), Bitset::full(n), Bitset::new(n), &mut out);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::HadamardMatrix;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn random_vectors(n: usize, count: usize, seed: u64) -> Vec<SignVector> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| SignVector::from_minus_mask(n, rng.gen::<u64>()).unwrap())
            .collect()
    }

    #[test]
    fn bitset_ops() {
        let mut b = Bitset::new(130);
        for i in [0, 63, 64, 129] {
            b.insert(i);
        }
        assert_eq!(b.len(), 4);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        b.remove(63);
        assert!(!b.contains(63));
        assert_eq!(b.first(), Some(0));
    }

    #[test]
    fn antipodal_vectors_are_not_adjacent() {
        let v = SignVector::from_entries(&[1, -1, 1, 1]).unwrap();
        let g = build_gamma(&[v, v.neg()]);
        assert!(!g.adjacent(0, 1));
        assert!(find_cliques(&g, 2).is_empty());
    }

    #[test]
    fn hadamard_rows_form_complete_graph() {
        let h = HadamardMatrix::sylvester(4).unwrap();
        let g = build_gamma(h.rows());
        assert_eq!(g.edge_count(), 16 * 15 / 2);
        assert_eq!(find_cliques(&g, 16), vec![(0..16).collect::<Vec<_>>()]);
    }

    #[test]
    fn empty_graph_has_no_cliques() {
        let g = build_gamma(&[]);
        assert!(find_cliques(&g, 36).is_empty());
        assert!(maximal_cliques(&g).is_empty());
    }

    #[test]
    fn k_cliques_agree_with_maximal_cliques() {
        // at n = 8 the maximum clique size is 8, so every 8-clique is maximal
        for seed in 0..6 {
            let mut vs = random_vectors(8, 60, seed);
            vs.extend_from_slice(HadamardMatrix::sylvester(3).unwrap().rows());
            vs.sort();
            vs.dedup();
            let g = build_gamma(&vs);
            let mut filtered: Vec<_> = maximal_cliques(&g).into_iter().filter(|c| c.len() == 8).collect();
            filtered.sort();
            assert_eq!(find_cliques(&g, 8), filtered);
        }
    }

    #[test]
    fn small_k_clique_count_matches_brute_force() {
        let vs = random_vectors(8, 30, 99);
        let g = build_gamma(&vs);
        let mut brute = 0;
        for a in 0..30 {
            for b in a + 1..30 {
                for c in b + 1..30 {
                    if g.adjacent(a, b) && g.adjacent(a, c) && g.adjacent(b, c) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(find_cliques(&g, 3).len(), brute);
    }

    #[test]
    fn clique_count_independent_of_vertex_order() {
        let mut vs = random_vectors(8, 80, 5);
        vs.extend_from_slice(HadamardMatrix::sylvester(3).unwrap().rows());
        let base = find_cliques(&build_gamma(&vs), 8).len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            vs.shuffle(&mut rng);
            assert_eq!(find_cliques(&build_gamma(&vs), 8).len(), base);
        }
        assert!(base >= 1);
    }
}
