use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::FiniteComplex;
use super::nabla::nabla_fiber;
use super::rips::rips_complex;
use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::linalg::{EchelonBasis, Field, PrimeField, Scalars, SmallRationals, BigRationals};
use crate::rational::{serialize_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaDOptions {
    pub d: usize,
    pub q_grid: Vec<usize>,
    pub p_grid: Vec<usize>,
    pub n0: usize,
    pub scalars: Scalars,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaDCell {
    pub n: usize,
    pub vertices: usize,
    pub q: usize,
    pub p: usize,
    /// `dim Im(H_d(R^q) → H_d(R^{q+p}))`.
    pub image_dim: usize,
    pub value: CostValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaDTable {
    pub d: usize,
    pub n0: usize,
    pub cells: Vec<BetaDCell>,
    /// Tail minimum at the largest `q` and largest `p`; a finite proxy only.
    pub corner: Option<CostValue>,
}

/// One entry: the `d`-th image dimension between the `q`- and
/// `(q+p)`-Rips complexes, normalized by the vertex count.
pub fn beta_d_cell(
    position: usize,
    g: &UnlabeledGraph,
    q: usize,
    p: usize,
    opts: &BetaDOptions,
) -> Result<BetaDCell> {
    let sub = rips_complex(g, q, opts.d + 1)?;
    let sup = rips_complex(g, q + p, opts.d + 1)?;
    beta_d_from(position, g, q, p, &sub, &sup, opts)
}

fn beta_d_from(
    position: usize,
    g: &UnlabeledGraph,
    q: usize,
    p: usize,
    sub: &FiniteComplex,
    sup: &FiniteComplex,
    opts: &BetaDOptions,
) -> Result<BetaDCell> {
    let image_dim = nabla_fiber(sub, sup, opts.d, opts.scalars)?;
    Ok(BetaDCell {
        n: position,
        vertices: g.vertex_count(),
        q,
        p,
        image_dim,
        value: CostValue::count_over(image_dim, g.vertex_count()),
    })
}

impl BetaDTable {
    pub fn assemble(mut cells: Vec<BetaDCell>, opts: &BetaDOptions) -> Self {
        cells.sort_by_key(|c| (c.n, c.q, c.p));
        let qmax = opts.q_grid.iter().max();
        let pmax = opts.p_grid.iter().max();
        let corner = cells
            .iter()
            .filter(|c| Some(&c.q) == qmax && Some(&c.p) == pmax && c.n >= opts.n0)
            .map(|c| c.value)
            .min();
        BetaDTable {
            d: opts.d,
            n0: opts.n0,
            cells,
            corner,
        }
    }
}

fn check_grids(q_grid: &[usize], p_grid: Option<&[usize]>) -> Result<()> {
    if q_grid.is_empty() || p_grid.is_some_and(<[usize]>::is_empty) {
        return Err(Error::input("parameter grids must be nonempty"));
    }
    Ok(())
}

/// Normalized image dimensions of `H_d(R^q(G_n)) → H_d(R^{q+p}(G_n))`
/// over the grids, serially. Rips complexes are shared across cells.
pub fn beta_d_table(graphs: &[UnlabeledGraph], opts: &BetaDOptions) -> Result<BetaDTable> {
    check_grids(&opts.q_grid, Some(&opts.p_grid))?;
    let mut cells = Vec::new();
    for (pos, g) in graphs.iter().enumerate() {
        let mut cache: BTreeMap<usize, FiniteComplex> = BTreeMap::new();
        for &q in &opts.q_grid {
            for &p in &opts.p_grid {
                for r in [q, q + p] {
                    if !cache.contains_key(&r) {
                        cache.insert(r, rips_complex(g, r, opts.d + 1)?);
                    }
                }
                cells.push(beta_d_from(pos, g, q, p, &cache[&q], &cache[&(q + p)], opts)?);
            }
        }
    }
    Ok(BetaDTable::assemble(cells, opts))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElekOptions {
    pub q_grid: Vec<usize>,
    pub n0: usize,
    pub scalars: Scalars,
    /// Search-step budget for cycle enumeration per entry.
    pub budget: usize,
}

impl Default for ElekOptions {
    fn default() -> Self {
        ElekOptions {
            q_grid: vec![3, 4, 5, 6],
            n0: 0,
            scalars: Scalars::Rationals,
            budget: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElekCell {
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub q: usize,
    /// Dimension of the span of cycles of length at most `q`.
    pub cycle_space_dim: usize,
    /// `(|E| - dim V_q) / |V| - 1`.
    #[serde(serialize_with = "serialize_rational")]
    pub first_form: Rational,
    /// `b_1(G^q) / |V|`, with a 2-cell glued along each short cycle.
    #[serde(serialize_with = "serialize_rational")]
    pub second_form: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub discrepancy: Rational,
    /// Set when the enumeration hit its budget; `cycle_space_dim` is then
    /// only a lower bound.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElekTable {
    pub n0: usize,
    pub cells: Vec<ElekCell>,
    /// Minimum over the grid and the tail of the first form.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub corner_first: Option<Rational>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub corner_second: Option<Rational>,
}

fn serialize_opt_rational<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

impl ElekTable {
    pub fn assemble(mut cells: Vec<ElekCell>, opts: &ElekOptions) -> Self {
        cells.sort_by_key(|c| (c.n, c.q));
        let tail = || cells.iter().filter(|c| c.n >= opts.n0);
        let corner_first = tail().map(|c| c.first_form).min();
        let corner_second = tail().map(|c| c.second_form).min();
        ElekTable {
            n0: opts.n0,
            cells,
            corner_first,
            corner_second,
        }
    }
}

/// Cycle-space entries for one graph and one `q`.
pub fn elek_cell(position: usize, g: &UnlabeledGraph, q: usize, opts: &ElekOptions) -> ElekCell {
    let (dim, truncated) = match opts.scalars {
        Scalars::Rationals => short_cycle_rank(&SmallRationals, g, q, opts.budget)
            .unwrap_or_else(|| {
                short_cycle_rank(&BigRationals, g, q, opts.budget).expect("no overflow")
            }),
        Scalars::Prime(p) => {
            let f = PrimeField::new(p).expect("validated prime");
            short_cycle_rank(&f, g, q, opts.budget).expect("no overflow")
        }
    };
    let v = g.vertex_count() as i64;
    let e = g.edge_count() as i64;
    let c = g.component_count() as i64;
    let first = Rational::new(e - dim as i64, v) - 1;
    let second = Rational::new(e - v + c - dim as i64, v);
    ElekCell {
        n: position,
        vertices: v as usize,
        edges: e as usize,
        components: c as usize,
        q,
        cycle_space_dim: dim,
        first_form: first,
        second_form: second,
        discrepancy: second - first,
        truncated,
    }
}

pub fn elek_beta(graphs: &[UnlabeledGraph], opts: &ElekOptions) -> Result<ElekTable> {
    check_grids(&opts.q_grid, None)?;
    let cells = graphs
        .iter()
        .enumerate()
        .flat_map(|(pos, g)| opts.q_grid.iter().map(move |&q| elek_cell(pos, g, q, opts)))
        .collect();
    Ok(ElekTable::assemble(cells, opts))
}

/// Rank of the span of simple cycles of length at most `q`, by depth-first
/// search from each cycle's smallest vertex. Returns `(rank, truncated)`;
/// `None` on arithmetic overflow.
fn short_cycle_rank<F: Field>(
    field: &F,
    g: &UnlabeledGraph,
    q: usize,
    budget: usize,
) -> Option<(usize, bool)> {
    let n = g.vertex_count();
    let cyclomatic = g.edge_count() + g.component_count() - n;
    let mut basis = EchelonBasis::new(field, g.edge_count());
    if q < 3 || cyclomatic == 0 {
        return Some((0, false));
    }
    let edges = g.edges();
    let edge_index = |a: usize, b: usize| -> (u32, i64) {
        let key = (a.min(b), a.max(b));
        let i = edges.binary_search(&key).expect("edge present");
        (i as u32, if a < b { 1 } else { -1 })
    };
    let mut steps = 0usize;
    let mut on_path = vec![false; n];
    for s in 0..n {
        // Iterative DFS over simple paths s = v0, v1, ..., vk with vi > s.
        let mut path = vec![s];
        let mut next_child = vec![0usize];
        on_path[s] = true;
        while let Some(&u) = path.last() {
            let k = path.len() - 1;
            let idx = next_child[k];
            let nbrs = g.neighbors(u);
            if idx == nbrs.len() || k + 1 > q {
                on_path[u] = false;
                path.pop();
                next_child.pop();
                continue;
            }
            next_child[k] += 1;
            let w = nbrs[idx];
            steps += 1;
            if steps > budget {
                for &v in &path {
                    on_path[v] = false;
                }
                return Some((basis.rank(), true));
            }
            if w == s {
                // Close a cycle of length k+1, once per orientation class.
                if k >= 2 && path[1] < u {
                    let mut row: Vec<(u32, i64)> = path
                        .windows(2)
                        .map(|e| edge_index(e[0], e[1]))
                        .collect();
                    row.push(edge_index(u, s));
                    row.sort_unstable_by_key(|&(c, _)| c);
                    basis.insert_int(&row)?;
                    if basis.rank() == cyclomatic {
                        for &v in &path {
                            on_path[v] = false;
                        }
                        return Some((basis.rank(), false));
                    }
                }
                continue;
            }
            if w < s || on_path[w] || k + 2 > q {
                continue;
            }
            on_path[w] = true;
            path.push(w);
            next_child.push(0);
        }
    }
    Some((basis.rank(), false))
}
