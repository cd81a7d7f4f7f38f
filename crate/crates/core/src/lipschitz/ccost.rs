//! Combinatorial-cost tables: `cost_L(G_n)` for a finite run of a sequence,
//! with a tail-minimum proxy for `inf_L liminf_n`.

use serde::Serialize;

use super::{lip_cost_exact, lip_cost_heuristic, ExactCaps, HeuristicOptions, LipSolution};
use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    Exact,
    Heuristic,
    /// Exact within the caps, heuristic beyond.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CcostOptions {
    pub l_max: usize,
    pub n0: usize,
    pub mode: SolverMode,
    pub caps: ExactCaps,
    pub heuristic: HeuristicOptions,
    /// Degree bound the sequence is expected to respect.
    pub degree_bound: usize,
}

impl Default for CcostOptions {
    fn default() -> Self {
        CcostOptions {
            l_max: 8,
            n0: 0,
            mode: SolverMode::Auto,
            caps: ExactCaps::default(),
            heuristic: HeuristicOptions::default(),
            degree_bound: 16,
        }
    }
}

/// One `(instance, L)` entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcostCell {
    /// Position of the instance in the sequence.
    pub n: usize,
    pub vertices: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub cost: CostValue,
    pub exact: bool,
    pub edges_kept: usize,
    #[serde(skip)]
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcostTable {
    pub l_max: usize,
    pub n0: usize,
    pub cells: Vec<CcostCell>,
    /// `min_L min_{n ≥ n0} cost_L(G_n)`; `None` when the tail is empty.
    pub estimate: Option<CostValue>,
    /// Set when some instance exceeds the declared degree bound.
    pub degree_warning: bool,
}

/// Solves one cell; `Auto` falls back to the heuristic when the exact caps
/// refuse the instance.
pub fn ccost_cell(
    position: usize,
    g: &UnlabeledGraph,
    l: usize,
    opts: &CcostOptions,
) -> Result<CcostCell> {
    let sol = match opts.mode {
        SolverMode::Exact => lip_cost_exact(g, l, opts.caps)?,
        SolverMode::Heuristic => lip_cost_heuristic(g, l, opts.heuristic)?,
        SolverMode::Auto => match lip_cost_exact(g, l, opts.caps) {
            Ok(s) => s,
            Err(Error::SizeCap { .. }) => lip_cost_heuristic(g, l, opts.heuristic)?,
            Err(e) => return Err(e),
        },
    };
    let LipSolution { cost, edges, exact } = sol;
    Ok(CcostCell {
        n: position,
        vertices: g.vertex_count(),
        l,
        cost,
        exact,
        edges_kept: edges.len(),
        edges,
    })
}

impl CcostTable {
    /// Assembles solved cells (any order) into a table. Within a row, a
    /// heuristic value larger than the previous column is replaced by that
    /// column's edge set, which stays feasible at the larger `L`.
    pub fn assemble(
        mut cells: Vec<CcostCell>,
        graphs: &[UnlabeledGraph],
        opts: &CcostOptions,
    ) -> CcostTable {
        cells.sort_by_key(|c| (c.n, c.l));
        for i in 1..cells.len() {
            let (head, tail) = cells.split_at_mut(i);
            let prev = &head[i - 1];
            let cur = &mut tail[0];
            if prev.n == cur.n && cur.cost > prev.cost {
                cur.cost = prev.cost;
                cur.edges = prev.edges.clone();
                cur.edges_kept = prev.edges_kept;
                cur.exact = false;
            }
        }
        let estimate = cells.iter().filter(|c| c.n >= opts.n0).map(|c| c.cost).min();
        let degree_warning = graphs.iter().any(|g| g.max_degree() > opts.degree_bound);
        CcostTable {
            l_max: opts.l_max,
            n0: opts.n0,
            cells,
            estimate,
            degree_warning,
        }
    }

    pub fn row(&self, position: usize) -> impl Iterator<Item = &CcostCell> {
        self.cells.iter().filter(move |c| c.n == position)
    }
}

/// Fills `cost_L(G_n)` for `1 ≤ L ≤ l_max` over the sequence, serially.
pub fn ccost_table(graphs: &[UnlabeledGraph], opts: &CcostOptions) -> Result<CcostTable> {
    if opts.l_max == 0 {
        return Err(Error::input("l_max must be at least 1"));
    }
    let mut cells = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        for l in 1..=opts.l_max {
            cells.push(ccost_cell(i, g, l, opts)?);
        }
    }
    Ok(CcostTable::assemble(cells, graphs, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> UnlabeledGraph {
        UnlabeledGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn constant_sequence() {
        let graphs = vec![cycle(4); 3];
        let opts = CcostOptions {
            l_max: 3,
            ..Default::default()
        };
        let t = ccost_table(&graphs, &opts).unwrap();
        for l in 1..=3 {
            let col: Vec<_> = t.cells.iter().filter(|c| c.l == l).map(|c| c.cost).collect();
            assert!(col.windows(2).all(|w| w[0] == w[1]));
        }
        let last = t.cells.iter().find(|c| c.n == 0 && c.l == 3).unwrap().cost;
        assert_eq!(t.estimate, Some(last));
        assert_eq!(last, CostValue::new(3, 4).unwrap());
    }

    #[test]
    fn rows_are_monotone() {
        let graphs: Vec<_> = (4..=8).map(cycle).collect();
        let t = ccost_table(&graphs, &CcostOptions { l_max: 7, ..Default::default() }).unwrap();
        for i in 0..graphs.len() {
            let row: Vec<_> = t.row(i).map(|c| c.cost).collect();
            assert!(row.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn degree_warning() {
        let star = UnlabeledGraph::new(6, (1..6).map(|v| (0, v))).unwrap();
        let opts = CcostOptions {
            l_max: 1,
            degree_bound: 3,
            ..Default::default()
        };
        assert!(ccost_table(&[star], &opts).unwrap().degree_warning);
    }
}
