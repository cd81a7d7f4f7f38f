//! Simple undirected graphs and their distance structure.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::groupoid::{BaseSpace, Graphing, PartialBijection, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnlabeledGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl UnlabeledGraph {
    /// Builds a simple graph. Edges are normalized to `(min, max)`, sorted and
    /// deduplicated; self-loops are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    /// Like [`UnlabeledGraph::new`] but silently drops loops and repeated edges.
    pub fn simplify(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, edges.into_iter().filter(|(u, v)| u != v))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        UnlabeledGraph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.classes()
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// BFS distances from `src`; `usize::MAX` marks unreachable vertices.
    /// Stops expanding past `limit`.
    pub fn distances_from(&self, src: usize, limit: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= limit {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        let d = self.distances_from(u, usize::MAX)[v];
        (d != usize::MAX).then_some(d)
    }

    /// All-pairs distances (`usize::MAX` = disconnected).
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.distances_from(v, usize::MAX)).collect()
    }

    /// Largest distance inside a component.
    pub fn max_component_diameter(&self) -> usize {
        (0..self.n)
            .flat_map(|v| self.distances_from(v, usize::MAX))
            .filter(|&d| d != usize::MAX)
            .max()
            .unwrap_or(0)
    }

    /// Unordered pairs at distance between 1 and `limit`.
    pub fn pairs_within(&self, limit: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let d = self.distances_from(u, limit);
            for (v, &dv) in d.iter().enumerate().skip(u + 1) {
                if dv != usize::MAX && dv <= limit && dv >= 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The graph as a symmetric graphing: one single-pair bisection per
    /// edge `u < v`, mapping `u` to `v`.
    pub fn to_graphing(&self) -> Graphing {
        let base = BaseSpace::new(self.n).expect("graph has vertices");
        let bisections = self
            .edges
            .iter()
            .map(|&(u, v)| PartialBijection::new(base, [(u, v)]).expect("valid pair"))
            .collect();
        Graphing::new(base, bisections).expect("same base")
    }

    /// Graph Laplacian `D - A` as dense integer rows.
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.n]; self.n];
        for &(u, v) in &self.edges {
            m[u][v] -= 1;
            m[v][u] -= 1;
            m[u][u] += 1;
            m[v][v] += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_edges() {
        let g = UnlabeledGraph::new(3, [(2, 0), (0, 2), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert!(UnlabeledGraph::new(3, [(1, 1)]).is_err());
        let s = UnlabeledGraph::simplify(3, [(1, 1), (0, 1)]).unwrap();
        assert_eq!(s.edge_count(), 1);
    }

    #[test]
    fn distances_on_cycle() {
        let c6 = UnlabeledGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert_eq!(c6.distance(0, 3), Some(3));
        assert_eq!(c6.max_component_diameter(), 3);
        assert_eq!(c6.pairs_within(1).len(), 6);
        assert_eq!(c6.pairs_within(3).len(), 15);
        let two = UnlabeledGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.distance(0, 3), None);
        assert_eq!(two.component_count(), 2);
    }
}
