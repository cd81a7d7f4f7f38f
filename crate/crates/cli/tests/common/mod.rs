//! Independent oracles shared by the acceptance and property suites. None of
//! these call the library's solvers: ranks use big-rational elimination,
//! boundaries are rebuilt from vertex lists, and Lipschitz costs come from
//! exhaustive subset search.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use costbeta_core::{generate, FiniteComplex, UnlabeledGraph};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Row-reduces `m` in place and returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank over Q of a list of row vectors.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` for `a` given as rows, each of length `cols`.
pub fn nullspace(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Cells of dimension `i` as an index map.
pub fn cell_index(k: &FiniteComplex, i: usize) -> HashMap<Vec<u32>, usize> {
    k.cells_of(i).enumerate().map(|(j, c)| (c.to_vec(), j)).collect()
}

/// `∂_i` as a dense matrix: rows are `(i-1)`-cells of `target`, columns
/// are `i`-cells of `source`. Face `j` carries sign `(-1)^j`.
pub fn boundary_dense(source: &FiniteComplex, target: &FiniteComplex, i: usize) -> Vec<Vec<Q>> {
    let faces = cell_index(target, i - 1);
    let mut m = vec![vec![Q::zero(); source.count(i)]; target.count(i - 1)];
    for (col, c) in source.cells_of(i).enumerate() {
        for j in 0..c.len() {
            let mut face = c.to_vec();
            face.remove(j);
            let row = faces[&face];
            m[row][col] = if j % 2 == 0 { Q::one() } else { -Q::one() };
        }
    }
    m
}

fn transpose(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Betti number over Q: `dim Z_i − dim B_i`.
pub fn betti_oracle(k: &FiniteComplex, i: usize) -> usize {
    let n = k.count(i);
    let z = if i == 0 { n } else { n - rank(&boundary_dense(k, k, i)) };
    let b = if k.count(i + 1) == 0 { 0 } else { rank(&transpose(&boundary_dense(k, k, i + 1), k.count(i + 1))) };
    z - b
}

/// `dim Im(H_i(sub) → H_i(sup)) = dim(Z_i(sub) + B_i(sup)) − dim B_i(sup)`,
/// with the cycle basis of `sub` computed explicitly.
pub fn image_rank_oracle(sub: &FiniteComplex, sup: &FiniteComplex, i: usize) -> usize {
    let n_sub = sub.count(i);
    let n_sup = sup.count(i);
    let cycles = if i == 0 {
        (0..n_sub)
            .map(|j| {
                let mut v = vec![Q::zero(); n_sub];
                v[j] = Q::one();
                v
            })
            .collect()
    } else {
        nullspace(&boundary_dense(sub, sub, i), n_sub)
    };
    let pos = cell_index(sup, i);
    let embedded: Vec<Vec<Q>> = cycles
        .iter()
        .map(|z| {
            let mut v = vec![Q::zero(); n_sup];
            for (j, c) in sub.cells_of(i).enumerate() {
                v[pos[c]] = z[j].clone();
            }
            v
        })
        .collect();
    let boundaries: Vec<Vec<Q>> = if sup.count(i + 1) == 0 {
        Vec::new()
    } else {
        transpose(&boundary_dense(sup, sup, i + 1), sup.count(i + 1))
    };
    let b = rank(&boundaries);
    let mut all = boundaries;
    all.extend(embedded);
    rank(&all) - b
}

/// All-pairs BFS distances, `usize::MAX` when unreachable.
pub fn distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

/// Mutual L-Lipschitz containment of two edge sets on `n` vertices.
pub fn lip_equivalent(n: usize, a: &[(usize, usize)], b: &[(usize, usize)], l: usize) -> bool {
    let da = distances(n, a);
    let db = distances(n, b);
    a.iter().all(|&(u, v)| db[u][v] <= l) && b.iter().all(|&(u, v)| da[u][v] <= l)
}

/// Whether every edge of `g` joins vertices within `l` steps of `h`, with
/// `h` given as adjacency bitmasks (at most 64 vertices).
fn covered_within(adj: &[u64], g: &[(usize, usize)], l: usize) -> bool {
    g.iter().all(|&(u, v)| {
        let mut reach = 1u64 << u;
        for _ in 0..l {
            let mut next = reach;
            for (w, &a) in adj.iter().enumerate() {
                if reach >> w & 1 == 1 {
                    next |= a;
                }
            }
            reach = next;
        }
        reach >> v & 1 == 1
    })
}

/// Minimum edge count of a graph L-Lipschitz equivalent to `g`, by trying
/// subsets of the pairs within distance `l` in increasing size. Any pair
/// farther apart cannot be an edge of an equivalent graph, so only the
/// other direction needs checking per subset.
pub fn lip_cost_oracle(g: &UnlabeledGraph, l: usize) -> usize {
    let n = g.vertex_count();
    assert!(n <= 64);
    let d = distances(n, g.edges());
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| d[u][v] <= l)
        .collect();
    let m = pairs.len();
    for k in 0..=m {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut adj = vec![0u64; n];
            for &i in &idx {
                let (u, v) = pairs[i];
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            if covered_within(&adj, g.edges(), l) {
                return k;
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    unreachable!("g is equivalent to itself")
}

/// Advances `c` to the next k-subset of `0..m`; false after the last one.
pub fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Graphs on at most eight vertices used by the exactness checks.
pub fn small_graph_corpus() -> Vec<(String, UnlabeledGraph)> {
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push((format!("C{n}"), generate::cycle(n).unwrap()));
    }
    for n in 2..=8 {
        out.push((format!("P{n}"), generate::path(n).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("K{n}"), generate::complete(n).unwrap()));
    }
    out.push(("star6".into(), UnlabeledGraph::new(6, (1..6).map(|v| (0, v))).unwrap()));
    out.push((
        "two-triangles".into(),
        UnlabeledGraph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap(),
    ));
    out.push((
        "cube".into(),
        UnlabeledGraph::new(
            8,
            (0..8usize).flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b)))).filter(|&(u, v)| u < v),
        )
        .unwrap(),
    ));
    out.push((
        "theta".into(),
        UnlabeledGraph::new(7, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 3), (0, 5), (5, 6), (6, 3)]).unwrap(),
    ));
    for seed in 0..6 {
        let n = 6 + (seed as usize % 3);
        out.push((format!("gnp{n}-s{seed}"), generate::gnp(n, 0.4, seed).unwrap()));
    }
    out
}

/// Six-vertex real projective plane.
pub fn rp2() -> FiniteComplex {
    let t: [[u32; 3]; 10] = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
    ];
    FiniteComplex::from_simplices(&t.iter().map(|s| s.to_vec()).collect::<Vec<_>>())
}

/// Seven-vertex torus.
pub fn torus7() -> FiniteComplex {
    let mut tri = Vec::new();
    for i in 0..7u32 {
        tri.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tri.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    FiniteComplex::from_simplices(&tri)
}

/// Complexes for the Laplacian and Euler checks.
pub fn complex_corpus() -> Vec<(String, FiniteComplex)> {
    let mut out = vec![("rp2".to_string(), rp2()), ("torus7".to_string(), torus7())];
    out.push(("sphere".into(), FiniteComplex::from_simplices(&[vec![0, 1, 2, 3]]).skeleton(2)));
    for (name, g) in small_graph_corpus() {
        for q in 1..=2 {
            out.push((format!("rips{q}({name})"), costbeta_core::homology::rips_complex(&g, q, 3).unwrap()));
        }
    }
    for seed in 0..20 {
        out.push((
            format!("flag-s{seed}"),
            generate::random_flag_complex(9, 0.5, 3, seed).unwrap(),
        ));
    }
    out
}
