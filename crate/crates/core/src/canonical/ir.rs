//! Canonical labeling by individualization and refinement.
//!
//! The search tree is walked depth first. Each node carries an equitable
//! ordered partition; its children individualize the vertices of the first
//! smallest non-singleton cell. The refinement trace hash serves as a node
//! invariant, and the canonical leaf is the one maximizing
//! `(invariant sequence, relabeled graph)`. Leaves with equal relabeled
//! graphs give automorphisms, which are used for orbit pruning and backjumps.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigUint;

use super::graph::ColoredGraph;
use super::group::{self, Perm};

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Extra vertex invariant applied after every refinement. `value` must be
/// invariant under graph isomorphisms that preserve the ordered partition;
/// `singletons` lists the vertices of singleton cells in cell order.
pub trait CellInvariant: Sync {
    fn value(&self, v: u32, singletons: &[u32]) -> u64;
}

/// Scratch buffers shared by all refinements of one search.
struct Scratch {
    count: Vec<u32>,
    touched: Vec<u32>,
    mark: Vec<bool>,
    queued: Vec<bool>,
    cells: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            count: vec![0; n],
            touched: Vec::new(),
            mark: vec![false; n],
            queued: vec![false; n],
            cells: Vec::new(),
        }
    }
}

#[derive(Clone)]
struct Partition {
    /// position -> vertex
    lab: Vec<u32>,
    /// vertex -> position
    pos: Vec<u32>,
    /// position -> start of its cell
    cell: Vec<u32>,
    /// cell start -> cell end (exclusive); meaningful at cell starts only
    end: Vec<u32>,
    ncells: usize,
}

impl Partition {
    /// Cells of equal color, ordered by color.
    fn by_color(g: &ColoredGraph) -> (Self, u64) {
        let n = g.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (g.color(v), v));
        let mut pos = vec![0; n];
        for (p, &v) in lab.iter().enumerate() {
            pos[v as usize] = p as u32;
        }
        let mut cell = vec![0; n];
        let mut end = vec![0; n];
        let mut ncells = 0;
        let mut h = mix(0, n as u64);
        let mut p = 0;
        while p < n {
            let c = g.color(lab[p]);
            let mut e = p;
            while e < n && g.color(lab[e]) == c {
                cell[e] = p as u32;
                e += 1;
            }
            end[p] = e as u32;
            ncells += 1;
            h = mix(mix(h, c as u64), (e - p) as u64);
            p = e;
        }
        (
            Self {
                lab,
                pos,
                cell,
                end,
                ncells,
            },
            h,
        )
    }

    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.ncells);
        let mut p = 0;
        while p < self.lab.len() {
            out.push(p as u32);
            p = self.end[p] as usize;
        }
        out
    }

    fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut p = 0;
        while p < self.lab.len() {
            let size = self.end[p] - p as u32;
            if size > 1 && best.map_or(true, |(_, s)| size < s) {
                best = Some((p as u32, size));
            }
            p = self.end[p] as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Moves `v` in front of its cell and splits it off. Returns the start
    /// of the new singleton cell.
    fn individualize(&mut self, v: u32) -> u32 {
        let p = self.pos[v as usize] as usize;
        let s = self.cell[p] as usize;
        let e = self.end[s];
        let u = self.lab[s];
        self.lab.swap(s, p);
        self.pos[v as usize] = s as u32;
        self.pos[u as usize] = p as u32;
        self.end[s] = s as u32 + 1;
        self.end[s + 1] = e;
        for q in s + 1..e as usize {
            self.cell[q] = s as u32 + 1;
        }
        self.ncells += 1;
        s as u32
    }

    /// Refines to the coarsest equitable partition finer than the current
    /// one, starting from the splitter cells `init`. Returns the trace hash.
    fn refine(&mut self, g: &ColoredGraph, init: &[u32], sc: &mut Scratch, seed: u64) -> u64 {
        let n = self.lab.len();
        let mut h = seed;
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &c in init {
            if !sc.queued[c as usize] {
                sc.queued[c as usize] = true;
                queue.push_back(c);
            }
        }
        while let Some(w) = queue.pop_front() {
            sc.queued[w as usize] = false;
            if self.ncells == n {
                continue;
            }
            sc.touched.clear();
            for p in w..self.end[w as usize] {
                let v = self.lab[p as usize];
                for &u in g.neighbors(v) {
                    if sc.count[u as usize] == 0 {
                        sc.touched.push(u);
                    }
                    sc.count[u as usize] += 1;
                }
            }
            sc.cells.clear();
            for &u in &sc.touched {
                let c = self.cell[self.pos[u as usize] as usize];
                if !sc.mark[c as usize] {
                    sc.mark[c as usize] = true;
                    sc.cells.push(c);
                }
            }
            sc.cells.sort_unstable();
            h = mix(mix(h, w as u64), sc.touched.len() as u64);

            let cells = std::mem::take(&mut sc.cells);
            for &c in &cells {
                sc.mark[c as usize] = false;
                let (s, e) = (c as usize, self.end[c as usize] as usize);
                if e - s == 1 {
                    h = mix(mix(h, c as u64), sc.count[self.lab[s] as usize] as u64);
                    continue;
                }
                let count = &sc.count;
                let first_key = count[self.lab[s] as usize];
                if self.lab[s..e].iter().all(|&v| count[v as usize] == first_key) {
                    h = mix(mix(h, c as u64), first_key as u64);
                    continue;
                }
                self.lab[s..e].sort_unstable_by_key(|&v| count[v as usize]);
                for q in s..e {
                    self.pos[self.lab[q] as usize] = q as u32;
                }
                // split into fragments of equal count
                let mut frags: Vec<(u32, u32)> = Vec::new();
                let mut f = s;
                while f < e {
                    let key = count[self.lab[f] as usize];
                    let mut fe = f;
                    while fe < e && count[self.lab[fe] as usize] == key {
                        self.cell[fe] = f as u32;
                        fe += 1;
                    }
                    self.end[f] = fe as u32;
                    h = mix(mix(mix(h, f as u64), key as u64), (fe - f) as u64);
                    frags.push((f as u32, (fe - f) as u32));
                    f = fe;
                }
                self.ncells += frags.len() - 1;
                let skip = if sc.queued[s] {
                    Some(c)
                } else {
                    let max = frags.iter().map(|&(_, l)| l).max().unwrap_or(0);
                    frags.iter().find(|&&(_, l)| l == max).map(|&(st, _)| st)
                };
                for &(st, _) in &frags {
                    if Some(st) != skip && !sc.queued[st as usize] {
                        sc.queued[st as usize] = true;
                        queue.push_back(st);
                    }
                }
            }
            sc.cells = cells;
            for &u in &sc.touched {
                sc.count[u as usize] = 0;
            }
        }
        mix(h, self.ncells as u64)
    }

    /// Splits non-singleton cells by `inv`; returns the starts of all new
    /// fragments and mixes the split into `h`.
    fn split_by_invariant(&mut self, inv: &dyn CellInvariant, h: &mut u64) -> Vec<u32> {
        let n = self.lab.len();
        let mut singletons = Vec::new();
        let mut p = 0;
        while p < n {
            if self.end[p] as usize == p + 1 {
                singletons.push(self.lab[p]);
            }
            p = self.end[p] as usize;
        }
        let mut starts = Vec::new();
        let mut p = 0;
        while p < n {
            let e = self.end[p] as usize;
            if e - p > 1 {
                let mut keyed: Vec<(u64, u32)> =
                    self.lab[p..e].iter().map(|&v| (inv.value(v, &singletons), v)).collect();
                keyed.sort_unstable();
                if keyed[0].0 != keyed[e - p - 1].0 {
                    for (q, &(_, v)) in (p..e).zip(&keyed) {
                        self.lab[q] = v;
                        self.pos[v as usize] = q as u32;
                    }
                    let mut f = p;
                    while f < e {
                        let key = keyed[f - p].0;
                        let mut fe = f;
                        while fe < e && keyed[fe - p].0 == key {
                            self.cell[fe] = f as u32;
                            fe += 1;
                        }
                        self.end[f] = fe as u32;
                        *h = mix(mix(mix(*h, f as u64), key), (fe - f) as u64);
                        starts.push(f as u32);
                        self.ncells += 1;
                        f = fe;
                    }
                    self.ncells -= 1;
                }
            }
            p = e;
        }
        starts
    }

    /// The graph relabeled by position, as a flat sequence.
    fn encode(&self, g: &ColoredGraph) -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * g.len() + 2 * g.edge_count());
        let mut nb = Vec::new();
        for &v in &self.lab {
            out.push(g.color(v));
            nb.clear();
            nb.extend(g.neighbors(v).iter().map(|&u| self.pos[u as usize]));
            nb.sort_unstable();
            out.push(nb.len() as u32);
            out.extend_from_slice(&nb);
        }
        out
    }
}

/// Counters from one canonical labeling run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub generators: usize,
}

/// Result of canonical labeling.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical label of vertex `v`.
    pub labeling: Vec<u32>,
    /// The canonically relabeled graph, flattened; equal for two graphs iff
    /// they are isomorphic.
    pub encoding: Vec<u32>,
    /// Automorphism group generators found during the search.
    pub generators: Vec<Perm>,
    /// Product of the orbit sizes along the first path.
    pub orbit_product: BigUint,
    pub stats: SearchStats,
}

impl CanonicalForm {
    /// Automorphism group order from the generators (Schreier–Sims).
    pub fn group_order(&self) -> BigUint {
        group::group_order(self.labeling.len(), &self.generators)
    }
}

struct Leaf {
    lab: Vec<u32>,
    path: Vec<u32>,
    invs: Vec<u64>,
    enc: Vec<u32>,
}

struct Search<'a> {
    g: &'a ColoredGraph,
    inv: Option<&'a dyn CellInvariant>,
    sc: Scratch,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Perm>,
    stats: SearchStats,
}

fn refine_full(
    part: &mut Partition,
    g: &ColoredGraph,
    inv: Option<&dyn CellInvariant>,
    init: &[u32],
    sc: &mut Scratch,
    seed: u64,
) -> u64 {
    let mut h = part.refine(g, init, sc, seed);
    if let Some(inv) = inv {
        loop {
            let starts = part.split_by_invariant(inv, &mut h);
            if starts.is_empty() {
                break;
            }
            h = part.refine(g, &starts, sc, h);
        }
    }
    h
}

impl<'a> Search<'a> {
    fn prefix_cmp(a: &[u64], b: &[u64]) -> Ordering {
        a.iter().zip(b).map(|(x, y)| x.cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }

    /// Explores the subtree at `part`. Returns `Some(level)` to abandon
    /// every node deeper than `level`.
    fn explore(&mut self, part: Partition, path: &mut Vec<u32>, invs: &mut Vec<u64>) -> Option<usize> {
        self.stats.nodes += 1;
        if let (Some(first), Some(best)) = (&self.first, &self.best) {
            let eq_first = invs.len() <= first.invs.len() && first.invs[..invs.len()] == invs[..];
            if !eq_first && Self::prefix_cmp(invs, &best.invs) == Ordering::Less {
                return None;
            }
        }
        let Some(target) = part.target_cell() else {
            return self.leaf(&part, path, invs);
        };
        let level = path.len();
        let t = target as usize;
        let mut children: Vec<u32> = part.lab[t..part.end[t] as usize].to_vec();
        children.sort_unstable();

        let mut explored: Vec<u32> = Vec::new();
        let mut reps: Vec<u32> = Vec::new();
        let mut reps_from = usize::MAX;
        for w in children {
            if !explored.is_empty() {
                if reps_from != self.generators.len() {
                    let stab: Vec<&Perm> = self
                        .generators
                        .iter()
                        .filter(|g| path.iter().all(|&p| g[p as usize] == p))
                        .collect();
                    reps = group::orbit_reps(self.g.len(), &stab);
                    reps_from = self.generators.len();
                }
                if explored.iter().any(|&u| reps[u as usize] == reps[w as usize]) {
                    continue;
                }
            }
            let mut child = part.clone();
            let cell = child.individualize(w);
            let seed = mix(level as u64 + 1, cell as u64);
            let h = refine_full(&mut child, self.g, self.inv, &[cell], &mut self.sc, seed);
            path.push(w);
            invs.push(h);
            let r = self.explore(child, path, invs);
            path.pop();
            invs.pop();
            explored.push(w);
            if let Some(l) = r {
                if l < level {
                    return Some(l);
                }
            }
        }
        None
    }

    fn leaf(&mut self, part: &Partition, path: &[u32], invs: &[u64]) -> Option<usize> {
        self.stats.leaves += 1;
        let enc = part.encode(self.g);
        let leaf = Leaf {
            lab: part.lab.clone(),
            path: path.to_vec(),
            invs: invs.to_vec(),
            enc,
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                lab: leaf.lab.clone(),
                path: leaf.path.clone(),
                invs: leaf.invs.clone(),
                enc: leaf.enc.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.enc == leaf.enc {
            return self.record_automorphism(true, &leaf);
        }
        let best = self.best.as_ref().expect("best leaf set with the first");
        match (&leaf.invs, &leaf.enc).cmp(&(&best.invs, &best.enc)) {
            Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => self.record_automorphism(false, &leaf),
            Ordering::Less => None,
        }
    }

    fn record_automorphism(&mut self, with_first: bool, leaf: &Leaf) -> Option<usize> {
        let other = if with_first { &self.first } else { &self.best };
        let other = other.as_ref().expect("reference leaf");
        let n = leaf.lab.len();
        let mut gamma = vec![0u32; n];
        for p in 0..n {
            gamma[other.lab[p] as usize] = leaf.lab[p];
        }
        let common = other
            .path
            .iter()
            .zip(&leaf.path)
            .take_while(|(a, b)| a == b)
            .count();
        let fixes_prefix = leaf.path[..common].iter().all(|&v| gamma[v as usize] == v);
        debug_assert!(self.g.is_automorphism(&gamma));
        if !group::is_identity(&gamma) {
            self.generators.push(gamma);
        }
        fixes_prefix.then_some(common)
    }
}

/// Canonical labeling, automorphism generators and group order of `g`.
pub fn canonical_form(g: &ColoredGraph) -> CanonicalForm {
    canonical_form_with(g, None)
}

/// [`canonical_form`] with an extra invariant to shrink the search tree.
pub fn canonical_form_with(g: &ColoredGraph, inv: Option<&dyn CellInvariant>) -> CanonicalForm {
    let n = g.len();
    if n == 0 {
        return CanonicalForm {
            labeling: Vec::new(),
            encoding: Vec::new(),
            generators: Vec::new(),
            orbit_product: BigUint::from(1u32),
            stats: SearchStats::default(),
        };
    }
    let mut sc = Scratch::new(n);
    let (mut root, h0) = Partition::by_color(g);
    let starts = root.cell_starts();
    let h = refine_full(&mut root, g, inv, &starts, &mut sc, h0);
    let mut search = Search {
        g,
        inv,
        sc,
        first: None,
        best: None,
        generators: Vec::new(),
        stats: SearchStats::default(),
    };
    let mut path = Vec::new();
    let mut invs = vec![h];
    search.explore(root, &mut path, &mut invs);

    let first = search.first.expect("search reaches a leaf");
    let best = search.best.expect("search reaches a leaf");
    let mut orbit_product = BigUint::from(1u32);
    for (l, &v) in first.path.iter().enumerate() {
        let stab: Vec<&Perm> = search
            .generators
            .iter()
            .filter(|g| first.path[..l].iter().all(|&p| g[p as usize] == p))
            .collect();
        orbit_product *= BigUint::from(group::orbit_size(n, &stab, v));
    }
    let mut labeling = vec![0u32; n];
    for (p, &v) in best.lab.iter().enumerate() {
        labeling[v as usize] = p as u32;
    }
    let mut stats = search.stats;
    stats.generators = search.generators.len();
    CanonicalForm {
        labeling,
        encoding: best.enc,
        generators: search.generators,
        orbit_product,
        stats,
    }
}
