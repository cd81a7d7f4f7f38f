use super::complex::FiniteComplex;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;

/// Total cell count above which Rips construction refuses.
pub const DEFAULT_CELL_CAP: usize = 20_000_000;

/// The q-Rips complex truncated at dimension `dmax`: `i`-cells are the
/// `(i+1)`-subsets of vertices with pairwise graph distance at most `q`.
pub fn rips_complex(g: &UnlabeledGraph, q: usize, dmax: usize) -> Result<FiniteComplex> {
    rips_complex_capped(g, q, dmax, DEFAULT_CELL_CAP)
}

pub fn rips_complex_capped(
    g: &UnlabeledGraph,
    q: usize,
    dmax: usize,
    cap: usize,
) -> Result<FiniteComplex> {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    rips_on_subset(g, &all, q, dmax, cap)
}

/// Rips complex on a vertex subset, with distances measured in all of `g`.
pub(crate) fn rips_on_subset(
    g: &UnlabeledGraph,
    subset: &[usize],
    q: usize,
    dmax: usize,
    cap: usize,
) -> Result<FiniteComplex> {
    let n = g.vertex_count();
    let mut member = vec![false; n];
    for &v in subset {
        member[v] = true;
    }
    // Higher neighbors within distance q, sorted.
    let mut up: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n {
        if member[v] {
            let d = g.distances_from(v, q);
            up[v] = (v + 1..n)
                .filter(|&w| member[w] && d[w] <= q)
                .map(|w| w as u32)
                .collect();
        }
    }
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); dmax + 1];
    let mut total = 0usize;
    let mut prefix: Vec<u32> = Vec::with_capacity(dmax + 1);
    for v in (0..n).filter(|&v| member[v]) {
        prefix.clear();
        prefix.push(v as u32);
        extend(&up, &mut prefix, &up[v], dmax, &mut cells, &mut total, cap)?;
    }
    Ok(FiniteComplex::from_sorted_flat(cells))
}

/// Depth-first clique extension; emitting in DFS order keeps every
/// dimension lexicographically sorted.
fn extend(
    up: &[Vec<u32>],
    prefix: &mut Vec<u32>,
    candidates: &[u32],
    dmax: usize,
    cells: &mut [Vec<u32>],
    total: &mut usize,
    cap: usize,
) -> Result<()> {
    let d = prefix.len() - 1;
    cells[d].extend_from_slice(prefix);
    *total += 1;
    if *total > cap {
        return Err(Error::SizeCap {
            solver: "rips_complex",
            detail: format!("more than {cap} cells"),
        });
    }
    if d == dmax {
        return Ok(());
    }
    for (k, &w) in candidates.iter().enumerate() {
        let next = intersect(&candidates[k + 1..], &up[w as usize]);
        prefix.push(w);
        extend(up, prefix, &next, dmax, cells, total, cap)?;
        prefix.pop();
    }
    Ok(())
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
