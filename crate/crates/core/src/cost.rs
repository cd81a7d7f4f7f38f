//! Cost of graphings, of finite principal groupoids, and of coset actions.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groupoid::{Graphing, UnionFind};
use crate::rational::Rational;

/// A nonnegative exact rational, in units of mass per base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CostValue(Rational);

impl CostValue {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("zero denominator"));
        }
        Self::from_rational(Ratio::new(num, den))
    }

    pub fn from_rational(r: Rational) -> Result<Self> {
        if r < Rational::from_integer(0) {
            return Err(Error::input(format!("negative cost {r}")));
        }
        Ok(CostValue(r))
    }

    pub fn zero() -> Self {
        CostValue(Rational::from_integer(0))
    }

    pub fn integer(v: u32) -> Self {
        CostValue(Rational::from_integer(v as i64))
    }

    pub(crate) fn count_over(count: usize, n: usize) -> Self {
        CostValue(Ratio::new(count as i64, n as i64))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn as_rational(&self) -> Rational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for CostValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

/// `Σ_i |pairs(φ_i)| / n`.
pub fn graphing_cost(g: &Graphing) -> CostValue {
    CostValue::count_over(g.pair_count(), g.base().size())
}

/// Cost of the equivalence relation generated by `g`: a spanning forest has
/// `n - #orbits` edges.
pub fn principal_cost(g: &Graphing) -> CostValue {
    let n = g.base().size();
    CostValue::count_over(n - g.orbit_partition().len(), n)
}

/// Minimum cost of a generating family of unit pairs, by exhaustive search
/// over subsets of relation pairs in order of increasing size.
pub fn min_generating_bruteforce(g: &Graphing, max_points: usize) -> Result<CostValue> {
    let n = g.base().size();
    if n > max_points {
        return Err(Error::SizeCap {
            solver: "min_generating_bruteforce",
            detail: format!("{n} points exceeds cap {max_points}"),
        });
    }
    let orbits = g.orbit_partition();
    let target = orbits.len();
    let pairs: Vec<(usize, usize)> = orbits
        .iter()
        .flat_map(|o| {
            o.iter()
                .enumerate()
                .flat_map(move |(i, &x)| o[i + 1..].iter().map(move |&y| (x, y)))
        })
        .collect();
    let m = pairs.len();
    for k in 0..=m {
        let mut chosen: Vec<usize> = (0..k).collect();
        loop {
            let mut uf = UnionFind::new(n);
            let mut classes = n;
            for &i in &chosen {
                if uf.union(pairs[i].0, pairs[i].1) {
                    classes -= 1;
                }
            }
            if classes == target {
                return Ok(CostValue::count_over(k, n));
            }
            if !next_combination(&mut chosen, m) {
                break;
            }
        }
    }
    unreachable!("the full relation always generates itself")
}

/// Advances `c` to the next k-combination of `0..m` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], m: usize) -> bool {
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

/// Cost of the action on `Γ/Λ`: `1 + (rank(Λ) - 1) / [Γ:Λ]`.
pub fn coset_action_cost(index: u64, subgroup_rank: u64) -> Result<CostValue> {
    if index == 0 {
        return Err(Error::input("index must be at least 1"));
    }
    let r = Rational::from_integer(1)
        + Ratio::new(subgroup_rank as i64 - 1, index as i64);
    CostValue::from_rational(r)
}
