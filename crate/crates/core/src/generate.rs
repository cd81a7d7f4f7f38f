//! Built-in instance families: cycles, paths, random graphs, random free-group
//! actions, torus actions and iterated double covers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::group::{GroupPresentation, PermutationAction};
use crate::homology::{FiberedComplex, FiniteComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::input(msg))
    }
}

/// `C_n` for `n ≥ 3`.
pub fn cycle(n: usize) -> Result<UnlabeledGraph> {
    need(n >= 3, "cycle needs at least 3 vertices")?;
    UnlabeledGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<UnlabeledGraph> {
    need(n >= 1, "path needs at least 1 vertex")?;
    UnlabeledGraph::new(n, (1..n).map(|i| (i - 1, i)))
}

pub fn complete(n: usize) -> Result<UnlabeledGraph> {
    need(n >= 1, "complete graph needs at least 1 vertex")?;
    UnlabeledGraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<UnlabeledGraph> {
    need(n >= 1, "gnp needs at least 1 vertex")?;
    need((0.0..=1.0).contains(&p), "gnp probability must lie in [0, 1]")?;
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    UnlabeledGraph::new(n, edges)
}

/// Uniform-ish random `d`-regular simple graph by the configuration model,
/// rejecting pairings with loops or repeated edges.
pub fn random_regular(d: usize, n: usize, seed: u64) -> Result<UnlabeledGraph> {
    need(n > d, "random regular graph needs n > d")?;
    need((n * d) % 2 == 0, "n * d must be even")?;
    let mut r = rng(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    for _ in 0..10_000 {
        stubs.shuffle(&mut r);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        if edges.iter().any(|e| e.0 == e.1) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return UnlabeledGraph::new(n, edges);
    }
    Err(Error::input("configuration model did not produce a simple graph"))
}

/// `r` independent uniform permutations of `0..n` (seeded Fisher–Yates),
/// as an action of the free group of rank `r`.
pub fn random_schreier(r: usize, n: usize, seed: u64) -> Result<PermutationAction> {
    need(n >= 1, "degree must be at least 1")?;
    let mut g = rng(seed);
    let perms = (0..r)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut g);
            p
        })
        .collect();
    PermutationAction::new(GroupPresentation::free_of_rank(r), perms)
}

/// `Z = ⟨a⟩` acting on `Z/n` by the `n`-cycle.
pub fn cyclic_action(n: usize) -> Result<PermutationAction> {
    need(n >= 1, "degree must be at least 1")?;
    PermutationAction::new(
        GroupPresentation::free_of_rank(1),
        vec![(0..n).map(|i| (i + 1) % n).collect()],
    )
}

/// `⟨a, b | [a, b]⟩` acting on `(Z/k)²` by unit translations; the stabilizer
/// is `kZ ⊕ kZ`.
pub fn torus_action(k: usize) -> Result<PermutationAction> {
    need(k >= 1, "torus side must be at least 1")?;
    let z2 = GroupPresentation::parse(vec!["a".into(), "b".into()], &["a b a^-1 b^-1".into()])?;
    let idx = |x: usize, y: usize| (y % k) * k + (x % k);
    let a = (0..k * k).map(|v| idx(v % k + 1, v / k)).collect();
    let b = (0..k * k).map(|v| idx(v % k, v / k + 1)).collect();
    PermutationAction::new(z2, vec![a, b])
}

/// `F_r` acting on one point.
pub fn bouquet(r: usize) -> PermutationAction {
    PermutationAction::new(GroupPresentation::free_of_rank(r), vec![vec![0]; r])
        .expect("identity permutations")
}

/// Voltage lift with `Z/2` voltages: `(v, i) ↦ (s·v, i + ε(v, s))` on
/// `2n` points, `(v, i)` stored as `v + i·n`. Voltages are redrawn until the
/// lift is transitive and satisfies the relators.
pub fn double_cover<R: Rng>(base: &PermutationAction, rng: &mut R) -> Result<PermutationAction> {
    let n = base.degree();
    for _ in 0..1000 {
        let images: Vec<Vec<usize>> = base
            .images()
            .iter()
            .map(|p| {
                let volt: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
                (0..2 * n)
                    .map(|x| {
                        let (v, i) = (x % n, x / n);
                        p[v] + ((i + volt[v]) % 2) * n
                    })
                    .collect()
            })
            .collect();
        match PermutationAction::new(base.presentation().clone(), images) {
            Ok(a) if a.is_transitive() => return Ok(a),
            Ok(_) | Err(Error::RelatorViolation { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::input("no transitive double cover found"))
}

/// `[base, cover(base), cover(cover(base)), …]` with `depth` lifts.
pub fn double_cover_chain(
    base: &PermutationAction,
    depth: usize,
    seed: u64,
) -> Result<Vec<PermutationAction>> {
    need(base.is_transitive(), "base action must be transitive")?;
    let mut r = rng(seed);
    let mut chain = vec![base.clone()];
    for _ in 0..depth {
        let next = double_cover(chain.last().expect("nonempty"), &mut r)?;
        chain.push(next);
    }
    Ok(chain)
}

/// Flag complex of `G(n, p)` truncated at `dmax`.
pub fn random_flag_complex(n: usize, p: f64, dmax: usize, seed: u64) -> Result<FiniteComplex> {
    crate::homology::rips_complex(&gnp(n, p, seed)?, 1, dmax)
}

/// A random subcomplex: each cell is kept with probability `keep` provided
/// all of its facets were kept.
pub fn random_subcomplex(k: &FiniteComplex, keep: f64, seed: u64) -> FiniteComplex {
    let mut r = rng(seed);
    let mut kept: Vec<Vec<u32>> = Vec::new();
    let mut out: Vec<Vec<Vec<u32>>> = Vec::new();
    for i in 0..=k.dim().unwrap_or(0) {
        let mut layer = Vec::new();
        for c in k.cells_of(i) {
            let facets_ok = i == 0
                || (0..=i).all(|skip| {
                    let face: Vec<u32> = c
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    kept.binary_search(&face).is_ok()
                });
            if facets_ok && r.gen_bool(keep) {
                layer.push(c.to_vec());
            }
        }
        kept = layer.clone();
        out.push(layer);
    }
    FiniteComplex::new(out).expect("closed by construction")
}

/// A fibered pair `Σ ⊆ Σ′` over `fibers` points with small random fibers.
pub fn random_nested_pair(
    fibers: usize,
    max_vertices: usize,
    seed: u64,
) -> Result<(FiberedComplex, FiberedComplex)> {
    need(max_vertices >= 1, "fibers need at least one vertex")?;
    let mut r = rng(seed);
    let mut sub = Vec::with_capacity(fibers);
    let mut sup = Vec::with_capacity(fibers);
    for _ in 0..fibers {
        let n = r.gen_range(1..=max_vertices);
        let p = r.gen_range(0.2..0.8);
        let big = random_flag_complex(n, p, 3, r.gen())?;
        let small = random_subcomplex(&big, r.gen_range(0.5..1.0), r.gen());
        sub.push(small);
        sup.push(big);
    }
    Ok((FiberedComplex::new(sub)?, FiberedComplex::new(sup)?))
}

/// Random symmetric integer matrix of size `k` with entries in `[-b, b]`.
pub fn random_sym_matrix(k: usize, b: i64, seed: u64) -> crate::spectral::IntSymMatrix {
    let mut r = rng(seed);
    let mut rows = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = r.gen_range(-b..=b);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    crate::spectral::IntSymMatrix::new(rows).expect("symmetric by construction")
}

/// Random partial bijection on `n` points: a random injection from a random
/// domain.
pub fn random_partial_bijection(n: usize, seed: u64) -> Result<crate::groupoid::PartialBijection> {
    let base = crate::groupoid::BaseSpace::new(n)?;
    let mut r = rng(seed);
    let density = r.gen_range(0.0..=1.0);
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(&mut r);
    let pairs: Vec<(usize, usize)> = (0..n)
        .filter(|_| r.gen_bool(density))
        .zip(targets)
        .collect();
    crate::groupoid::PartialBijection::new(base, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{free_subgroup_rank, schreier_graph};

    #[test]
    fn basic_families() {
        assert_eq!(cycle(6).unwrap().edge_count(), 6);
        assert_eq!(path(5).unwrap().edge_count(), 4);
        let g = random_regular(3, 20, 1).unwrap();
        assert!((0..20).all(|v| g.neighbors(v).len() == 3));
        assert_eq!(random_regular(3, 20, 1).unwrap(), g);
        assert!(random_regular(3, 7, 0).is_err());
    }

    #[test]
    fn seeded_actions() {
        let a = random_schreier(2, 50, 7).unwrap();
        assert_eq!(a, random_schreier(2, 50, 7).unwrap());
        assert_ne!(a, random_schreier(2, 50, 8).unwrap());
        assert_eq!(torus_action(4).unwrap().degree(), 16);
    }

    #[test]
    fn double_covers() {
        let chain = double_cover_chain(&bouquet(2), 5, 0).unwrap();
        for (k, a) in chain.iter().enumerate() {
            assert_eq!(a.degree(), 1 << k);
            assert!(a.is_transitive());
            let r = free_subgroup_rank(&schreier_graph(a)).unwrap();
            assert_eq!(r, (1u64 << k) + 1);
        }
        let z = double_cover_chain(&cyclic_action(3).unwrap(), 3, 0).unwrap();
        assert_eq!(z[3].degree(), 24);
    }

    #[test]
    fn subcomplexes() {
        let k = random_flag_complex(9, 0.5, 3, 3).unwrap();
        let s = random_subcomplex(&k, 0.7, 4);
        assert!(s.is_subcomplex_of(&k));
        let (a, b) = random_nested_pair(5, 8, 11).unwrap();
        assert!(a.fibers().iter().zip(b.fibers()).all(|(x, y)| x.is_subcomplex_of(y)));
    }
}
