use std::collections::HashMap;

use num_traits::One;
use serde::Serialize;

use super::action::{PermutationAction, SchreierGraph};
use crate::cost::{coset_action_cost, CostValue};
use crate::error::{Error, Result};
use crate::groupoid::UnionFind;
use crate::linalg::{bareiss_rank, smith_invariants};
use crate::rational::{serialize_rational, Rational};

/// Rank of the stabilizer subgroup of a transitive free-group action:
/// `|E| - |V| + 1` with one edge per (vertex, generator).
pub fn free_subgroup_rank(g: &SchreierGraph) -> Result<u64> {
    if !g.free {
        return Err(Error::input(
            "presentation has relators; use abelianized_rank_bounds",
        ));
    }
    let mut uf = UnionFind::new(g.vertices);
    for &(v, _, w) in &g.edges {
        uf.union(v, w);
    }
    let orbits = uf.classes().len();
    if orbits != 1 {
        return Err(Error::Intransitive { orbits });
    }
    Ok((g.edges.len() + 1 - g.vertices) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankBounds {
    pub lower: u64,
    pub upper: u64,
}

/// Bounds on the rank of the stabilizer of vertex 0. The upper bound counts
/// Schreier generators; the lower bound is the minimal number of generators
/// of the abelianization, read off the Smith form of the rewritten relators.
pub fn abelianized_rank_bounds(a: &PermutationAction) -> Result<RankBounds> {
    let orbits = a.orbits().len();
    if orbits != 1 {
        return Err(Error::Intransitive { orbits });
    }
    let n = a.degree();
    let s = a.presentation().rank();
    let tree: std::collections::HashSet<(usize, usize)> =
        a.spanning_tree_edges().into_iter().collect();
    let mut column: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..n {
        for g in 0..s {
            if !tree.contains(&(v, g)) {
                let c = column.len();
                column.insert((v, g), c);
            }
        }
    }
    let cols = column.len();
    let upper = cols as u64;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for r in a.presentation().relators() {
        for start in 0..n {
            let mut row = vec![0i64; cols];
            let mut u = start;
            for &l in r.iter().rev() {
                let w = a.apply_letter(l, u);
                let (key, sign) = if l.inverse {
                    ((w, l.generator), -1)
                } else {
                    ((u, l.generator), 1)
                };
                if let Some(&c) = column.get(&key) {
                    row[c] += sign;
                }
                u = w;
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    let lower = if rows.is_empty() {
        upper
    } else {
        let rank = bareiss_rank(&rows);
        let torsion = smith_invariants(&rows)
            .into_iter()
            .filter(|d| !d.is_one())
            .count();
        (cols - rank + torsion) as u64
    };
    Ok(RankBounds { lower, upper })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankGradientRow {
    pub level: usize,
    pub index: u64,
    pub rank: RankBounds,
    /// True when `rank.lower == rank.upper` is the exact subgroup rank.
    pub exact: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub gradient_lower: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub gradient_upper: Rational,
    pub cost_lower: CostValue,
    pub cost_upper: CostValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankGradientTable {
    pub rows: Vec<RankGradientRow>,
    /// Last row's gradient interval; no fitting is attempted.
    #[serde(serialize_with = "serialize_opt_pair")]
    pub extrapolation: Option<(Rational, Rational)>,
}

fn serialize_opt_pair<S: serde::Serializer>(
    v: &Option<(Rational, Rational)>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.map(|(a, b)| {
        [
            format!("{}/{}", a.numer(), a.denom()),
            format!("{}/{}", b.numer(), b.denom()),
        ]
    })
    .serialize(s)
}

/// Rank of each stabilizer along a chain of transitive actions, with
/// `(rank - 1) / index` and the coset-action cost.
pub fn rank_gradient_table(chain: &[PermutationAction]) -> Result<RankGradientTable> {
    let rows = chain
        .iter()
        .enumerate()
        .map(|(level, a)| rank_gradient_row(level, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(RankGradientTable::from_rows(rows))
}

impl RankGradientTable {
    pub fn from_rows(mut rows: Vec<RankGradientRow>) -> Self {
        rows.sort_by_key(|r| r.level);
        let extrapolation = rows.last().map(|r| (r.gradient_lower, r.gradient_upper));
        RankGradientTable {
            rows,
            extrapolation,
        }
    }
}

pub fn rank_gradient_row(level: usize, a: &PermutationAction) -> Result<RankGradientRow> {
    let (rank, exact) = if a.presentation().is_free() {
        let r = free_subgroup_rank(&super::schreier_graph(a))?;
        (RankBounds { lower: r, upper: r }, true)
    } else {
        (abelianized_rank_bounds(a)?, false)
    };
    let index = a.degree() as u64;
    let grad = |r: u64| Rational::new(r as i64 - 1, index as i64);
    Ok(RankGradientRow {
        level,
        index,
        rank,
        exact,
        gradient_lower: grad(rank.lower),
        gradient_upper: grad(rank.upper),
        cost_lower: coset_action_cost(index, rank.lower)?,
        cost_upper: coset_action_cost(index, rank.upper)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{schreier_graph, GroupPresentation};

    fn cyc(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    fn z2() -> GroupPresentation {
        GroupPresentation::parse(vec!["a".into(), "b".into()], &["a b a^-1 b^-1".into()]).unwrap()
    }

    #[test]
    fn free_ranks() {
        let f2 = GroupPresentation::free_of_rank(2);
        let bouquet = PermutationAction::new(f2.clone(), vec![vec![0], vec![0]]).unwrap();
        assert_eq!(free_subgroup_rank(&schreier_graph(&bouquet)).unwrap(), 2);
        let three = PermutationAction::new(f2.clone(), vec![cyc(3), vec![0, 1, 2]]).unwrap();
        assert_eq!(free_subgroup_rank(&schreier_graph(&three)).unwrap(), 4);
        let z = PermutationAction::new(GroupPresentation::free_of_rank(1), vec![cyc(7)]).unwrap();
        assert_eq!(free_subgroup_rank(&schreier_graph(&z)).unwrap(), 1);
        let split = PermutationAction::new(f2, vec![vec![1, 0, 2], vec![1, 0, 2]]).unwrap();
        assert!(matches!(
            free_subgroup_rank(&schreier_graph(&split)),
            Err(Error::Intransitive { orbits: 2 })
        ));
    }

    #[test]
    fn free_bounds_are_exact() {
        let f2 = GroupPresentation::free_of_rank(2);
        let a = PermutationAction::new(f2, vec![cyc(5), vec![0, 2, 1, 4, 3]]).unwrap();
        let b = abelianized_rank_bounds(&a).unwrap();
        assert_eq!((b.lower, b.upper), (6, 6));
    }

    #[test]
    fn torus_subgroup_bounds() {
        // kZ ⊕ Z: a cycles k points, b acts trivially.
        for k in 1..8 {
            let a = PermutationAction::new(z2(), vec![cyc(k), (0..k).collect()]).unwrap();
            let b = abelianized_rank_bounds(&a).unwrap();
            assert_eq!(b.lower, 2, "k={k}");
            assert_eq!(b.upper, k as u64 + 1);
        }
    }

    #[test]
    fn torsion_counts() {
        let z2 = GroupPresentation::parse(vec!["a".into()], &["a^2".into()]).unwrap();
        let a = PermutationAction::new(z2, vec![vec![0]]).unwrap();
        assert_eq!(
            abelianized_rank_bounds(&a).unwrap(),
            RankBounds { lower: 1, upper: 1 }
        );
    }

    #[test]
    fn cyclic_chain_gradient() {
        let chain: Vec<_> = (1..6)
            .map(|n| PermutationAction::new(GroupPresentation::free_of_rank(1), vec![cyc(n)]).unwrap())
            .collect();
        let t = rank_gradient_table(&chain).unwrap();
        for r in &t.rows {
            assert_eq!(r.gradient_lower, Rational::from_integer(0));
            assert_eq!(r.cost_lower, CostValue::integer(1));
        }
    }
}
