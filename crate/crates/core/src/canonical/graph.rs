//! Vertex-colored simple graphs.

use crate::error::{Error, Result};

/// Undirected simple graph with a color per vertex. Adjacency lists are kept
/// sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    colors: Vec<u32>,
    adj: Vec<Vec<u32>>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<u32>) -> Self {
        let n = colors.len();
        Self {
            colors,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(colors: Vec<u32>, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::new(colors);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        let n = self.len() as u32;
        if u >= n || v >= n || u == v {
            return Err(Error::Param(format!("bad edge ({u}, {v}) on {n} vertices")));
        }
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a as usize];
            if let Err(i) = list.binary_search(&b) {
                list.insert(i, b);
            }
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color(&self, v: u32) -> u32 {
        self.colors[v as usize]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[u32]) -> Self {
        let n = self.len();
        let mut colors = vec![0; n];
        let mut adj = vec![Vec::new(); n];
        for v in 0..n {
            let pv = perm[v] as usize;
            colors[pv] = self.colors[v];
            let mut list: Vec<u32> = self.adj[v].iter().map(|&u| perm[u as usize]).collect();
            list.sort_unstable();
            adj[pv] = list;
        }
        Self { colors, adj }
    }

    /// True when `perm` maps the graph onto itself, colors included.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        (0..self.len()).all(|v| {
            let pv = perm[v];
            self.colors[v] == self.color(pv)
                && self.adj[v].len() == self.adj[pv as usize].len()
                && self.adj[v].iter().all(|&u| self.has_edge(pv, perm[u as usize]))
        })
    }
}
