//! Exact minimum L-Lipschitz cost by branch and bound over candidate edges.

use super::LipSolution;
use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactCaps {
    pub max_vertices: usize,
    pub max_candidates: usize,
}

impl Default for ExactCaps {
    fn default() -> Self {
        ExactCaps {
            max_vertices: 10,
            max_candidates: 24,
        }
    }
}

/// Bitset view of a graph on at most 64 vertices.
struct Masks {
    n: usize,
    adj: Vec<u64>,
}

impl Masks {
    fn new(n: usize) -> Self {
        Masks {
            n,
            adj: vec![0; n],
        }
    }

    fn add(&mut self, (u, v): (usize, usize)) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    fn remove(&mut self, (u, v): (usize, usize)) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    fn within(&self, u: usize, v: usize, l: usize) -> bool {
        let target = 1u64 << v;
        let mut reach = 1u64 << u;
        for _ in 0..l {
            if reach & target != 0 {
                return true;
            }
            let mut next = reach;
            let mut bits = reach;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= self.adj[i];
            }
            if next == reach {
                return false;
            }
            reach = next;
        }
        reach & target != 0
    }

    fn components(&self) -> usize {
        let mut seen = 0u64;
        let mut count = 0;
        for s in 0..self.n {
            if seen & (1 << s) != 0 {
                continue;
            }
            count += 1;
            let mut reach = 1u64 << s;
            loop {
                let mut next = reach;
                let mut bits = reach;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    next |= self.adj[i];
                }
                if next == reach {
                    break;
                }
                reach = next;
            }
            seen |= reach;
        }
        count
    }
}

struct Search<'a> {
    l: usize,
    targets: &'a [(usize, usize)],
    candidates: &'a [(usize, usize)],
    base_components: usize,
    included: Masks,
    superset: Masks,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    fn feasible(&self, m: &Masks) -> bool {
        self.targets.iter().all(|&(u, v)| m.within(u, v, self.l))
    }

    fn lower_bound(&self) -> usize {
        self.chosen.len() + self.included.components().saturating_sub(self.base_components)
    }

    fn run(&mut self, idx: usize) {
        if self.lower_bound() >= self.best.len() {
            return;
        }
        if self.feasible(&self.included) {
            self.best = self.chosen.clone();
            return;
        }
        if idx == self.candidates.len() {
            return;
        }
        let e = self.candidates[idx];
        // include
        self.included.add(e);
        self.chosen.push(idx);
        self.run(idx + 1);
        self.chosen.pop();
        self.included.remove(e);
        // exclude
        self.superset.remove(e);
        if self.feasible(&self.superset) {
            self.run(idx + 1);
        }
        self.superset.add(e);
    }
}

/// Minimum of `|E'| / |V|` over edge sets `E'` that are L-Lipschitz
/// equivalent to `g`. Candidates are the pairs at `g`-distance ≤ `l`; the
/// search branches on them in order of (distance, endpoints), bounded below by
/// connectivity and by a covering count.
pub fn lip_cost_exact(g: &UnlabeledGraph, l: usize, caps: ExactCaps) -> Result<LipSolution> {
    let n = g.vertex_count();
    let mut candidates = g.pairs_within(l);
    if n > 64 || (n > caps.max_vertices && candidates.len() > caps.max_candidates) {
        return Err(Error::SizeCap {
            solver: "lip_cost_exact",
            detail: format!(
                "{n} vertices and {} candidate edges (caps {} / {}); use the heuristic solver",
                candidates.len(),
                caps.max_vertices,
                caps.max_candidates
            ),
        });
    }
    if l == 0 && g.edge_count() > 0 {
        return Err(Error::input(
            "no 0-Lipschitz equivalent graphing exists for a graph with edges",
        ));
    }
    let dist = g.distance_matrix();
    candidates.sort_by_key(|&(u, v)| (dist[u][v], u, v));

    let mut superset = Masks::new(n);
    for &e in &candidates {
        superset.add(e);
    }
    let base_components = g.component_count();
    // G itself is feasible; its edges are the initial incumbent.
    let incumbent: Vec<usize> = candidates
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| dist[u][v] == 1)
        .map(|(i, _)| i)
        .collect();

    let covering = covering_bound(g, &candidates, l);
    let connectivity = n - base_components;
    let lower = connectivity.max(covering);

    let mut search = Search {
        l,
        targets: g.edges(),
        candidates: &candidates,
        base_components,
        included: Masks::new(n),
        superset,
        chosen: Vec::new(),
        best: incumbent,
    };
    if search.best.len() > lower {
        search.run(0);
    }
    let mut edges: Vec<(usize, usize)> = search.best.iter().map(|&i| candidates[i]).collect();
    edges.sort_unstable();
    Ok(LipSolution {
        cost: CostValue::count_over(edges.len(), n),
        edges,
        exact: true,
    })
}

/// Each target edge needs an L-path; a candidate edge `(a, b)` can only sit
/// on a path for target `(u, v)` if both `a` and `b` lie within
/// `max((l - 1) * l, 1)` of `u` in `g`. Dividing the number of targets by the most any single
/// candidate can serve bounds `|E'|` from below.
fn covering_bound(g: &UnlabeledGraph, candidates: &[(usize, usize)], l: usize) -> usize {
    let targets = g.edges();
    if targets.is_empty() || candidates.is_empty() {
        return 0;
    }
    let reach = l.saturating_sub(1).saturating_mul(l).max(1);
    let dist: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| g.distances_from(v, reach))
        .collect();
    let most = candidates
        .iter()
        .map(|&(a, b)| {
            targets
                .iter()
                .filter(|&&(u, _)| dist[u][a] <= reach && dist[u][b] <= reach)
                .count()
        })
        .max()
        .unwrap_or(1)
        .max(1);
    targets.len().div_ceil(most)
}
