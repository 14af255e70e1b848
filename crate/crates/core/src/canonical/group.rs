//! Permutation groups given by generators: orbits and Schreier–Sims orders.

use std::collections::HashMap;

use num_bigint::BigUint;

/// A permutation of `0..n`, `p[x]` is the image of `x`.
pub type Perm = Vec<u32>;

pub fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// `a` then `b`.
pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inverse(a: &[u32]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// Orbit representatives (smallest point of each orbit) under `gens`.
pub fn orbit_reps(n: usize, gens: &[&Perm]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[x as usize];
            parent[x as usize] = parent[p as usize];
            x = p;
        }
        x
    }
    for g in gens {
        for (x, &y) in g.iter().enumerate() {
            let a = find(&mut parent, x as u32);
            let b = find(&mut parent, y);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
    }
    (0..n as u32).map(|x| find(&mut parent, x)).collect()
}

/// Size of the orbit of `point` under `gens`.
pub fn orbit_size(n: usize, gens: &[&Perm], point: u32) -> usize {
    let mut seen = vec![false; n];
    seen[point as usize] = true;
    let mut stack = vec![point];
    let mut size = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                size += 1;
                stack.push(y);
            }
        }
    }
    size
}

struct Level {
    base: u32,
    /// `orbit point -> u` with `u[base] = point`.
    transversal: HashMap<u32, Perm>,
}

/// Base and strong generating set built by the deterministic Schreier–Sims
/// algorithm.
pub struct StabilizerChain {
    n: usize,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

fn first_moved(g: &[u32]) -> Option<u32> {
    g.iter().enumerate().find(|(x, &y)| *x as u32 != y).map(|(x, _)| x as u32)
}

impl StabilizerChain {
    pub fn new(n: usize, gens: &[Perm]) -> Self {
        let mut chain = Self {
            n,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for g in gens.iter().filter(|g| !is_identity(g)) {
            chain.push_strong(g.clone());
        }
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            chain.build_orbit(level);
            match chain.check_level(level) {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }

    /// Adds a strong generator, extending the base if it fixes every base
    /// point.
    fn push_strong(&mut self, g: Perm) {
        if self.levels.iter().all(|l| g[l.base as usize] == l.base) {
            let base = first_moved(&g).expect("non-identity generator");
            let mut transversal = HashMap::new();
            transversal.insert(base, identity(self.n));
            self.levels.push(Level { base, transversal });
        }
        self.strong.push(g);
    }

    /// Strong generators fixing the base points before level `i`.
    fn level_gens(&self, i: usize) -> Vec<&Perm> {
        self.strong
            .iter()
            .filter(|g| self.levels[..i].iter().all(|l| g[l.base as usize] == l.base))
            .collect()
    }

    fn build_orbit(&mut self, i: usize) {
        let gens: Vec<Perm> = self.level_gens(i).into_iter().cloned().collect();
        let base = self.levels[i].base;
        let mut transversal = HashMap::new();
        transversal.insert(base, identity(self.n));
        let mut orbit = vec![base];
        let mut idx = 0;
        while idx < orbit.len() {
            let p = orbit[idx];
            for s in &gens {
                let q = s[p as usize];
                if !transversal.contains_key(&q) {
                    let u = compose(&transversal[&p], s);
                    transversal.insert(q, u);
                    orbit.push(q);
                }
            }
            idx += 1;
        }
        self.levels[i].transversal = transversal;
    }

    /// Sifts every Schreier generator of level `i`; on the first failure
    /// adds the residue and returns the level it belongs to.
    fn check_level(&mut self, i: usize) -> Option<usize> {
        let gens: Vec<Perm> = self.level_gens(i).into_iter().cloned().collect();
        let mut points: Vec<u32> = self.levels[i].transversal.keys().copied().collect();
        points.sort_unstable();
        for p in points {
            for s in &gens {
                let q = s[p as usize];
                let level = &self.levels[i];
                let t = compose(&compose(&level.transversal[&p], s), &inverse(&level.transversal[&q]));
                let (h, j) = self.sift(i + 1, t);
                if !is_identity(&h) {
                    self.push_strong(h);
                    return Some(j.min(self.levels.len() - 1));
                }
            }
        }
        None
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where it stopped.
    fn sift(&self, from: usize, mut g: Perm) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let image = g[level.base as usize];
            match level.transversal.get(&image) {
                Some(u) => g = compose(&g, &inverse(u)),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.transversal.len())
        })
    }

    pub fn contains(&self, g: &[u32]) -> bool {
        let (h, _) = self.sift(0, g.to_vec());
        is_identity(&h)
    }
}

/// Order of the group generated by `gens` acting on `0..n`.
pub fn group_order(n: usize, gens: &[Perm]) -> BigUint {
    StabilizerChain::new(n, gens).order()
}
