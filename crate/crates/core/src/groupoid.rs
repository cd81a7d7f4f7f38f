//! Finite principal groupoids: base spaces, partial bijections (bisections),
//! graphings, orbits, word lengths and the isotropic/free decomposition.
//!
//! Points are dense integers `0..n` carrying the uniform probability measure,
//! so the measure of a bisection is simply `|pairs| / n`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseSpace {
    size: usize,
}

impl BaseSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::input("base space must have at least one point"));
        }
        Ok(BaseSpace { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Mass of a single point.
    pub fn point_mass(&self) -> Rational {
        Rational::new(1, self.size as i64)
    }

    fn check(&self, other: &BaseSpace) -> Result<()> {
        if self.size != other.size {
            return Err(Error::BaseMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }
}

/// An injective partial map on the points of a base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialBijection {
    base: BaseSpace,
    forward: BTreeMap<usize, usize>,
    label: Option<String>,
}

impl PartialBijection {
    pub fn new(base: BaseSpace, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (s, t) in pairs {
            if s >= base.size || t >= base.size {
                return Err(Error::input(format!(
                    "pair ({s}, {t}) out of range for {} points",
                    base.size
                )));
            }
            if forward.insert(s, t).is_some() {
                return Err(Error::input(format!("source {s} appears twice")));
            }
            if !targets.insert(t) {
                return Err(Error::input(format!("target {t} appears twice")));
            }
        }
        Ok(PartialBijection {
            base,
            forward,
            label: None,
        })
    }

    pub fn identity(base: BaseSpace) -> Self {
        PartialBijection {
            base,
            forward: (0..base.size).map(|x| (x, x)).collect(),
            label: None,
        }
    }

    pub fn empty(base: BaseSpace) -> Self {
        PartialBijection {
            base,
            forward: BTreeMap::new(),
            label: None,
        }
    }

    /// The total map `x -> perm[x]`.
    pub fn from_permutation(base: BaseSpace, perm: &[usize]) -> Result<Self> {
        if perm.len() != base.size {
            return Err(Error::input("permutation length differs from base size"));
        }
        Self::new(base, perm.iter().copied().enumerate())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn base(&self) -> BaseSpace {
        self.base
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.forward.get(&x).copied()
    }

    /// Pairs sorted by source.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward.iter().map(|(&s, &t)| (s, t))
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<usize> {
        self.forward.keys().copied().collect()
    }

    pub fn range(&self) -> BTreeSet<usize> {
        self.forward.values().copied().collect()
    }

    /// Normalized mass `|pairs| / n`.
    pub fn measure(&self) -> Rational {
        Rational::new(self.len() as i64, self.base.size as i64)
    }

    /// `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &PartialBijection) -> Result<PartialBijection> {
        self.base.check(&other.base)?;
        let forward = other
            .forward
            .iter()
            .filter_map(|(&x, &y)| self.apply(y).map(|z| (x, z)))
            .collect();
        Ok(PartialBijection {
            base: self.base,
            forward,
            label: None,
        })
    }

    pub fn invert(&self) -> PartialBijection {
        PartialBijection {
            base: self.base,
            forward: self.forward.iter().map(|(&s, &t)| (t, s)).collect(),
            label: self.label.clone(),
        }
    }

    /// Restriction to sources in `domain`.
    pub fn restrict(&self, domain: &BTreeSet<usize>) -> PartialBijection {
        PartialBijection {
            base: self.base,
            forward: self
                .forward
                .iter()
                .filter(|(s, _)| domain.contains(s))
                .map(|(&s, &t)| (s, t))
                .collect(),
            label: self.label.clone(),
        }
    }

    /// True when every pair of `self` is also a pair of `other`.
    pub fn is_restriction_of(&self, other: &PartialBijection) -> bool {
        self.pairs().all(|(s, t)| other.apply(s) == Some(t))
    }
}

/// Which word-length function to use on a graphing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthConvention {
    /// Shortest word in all generators and their inverses.
    #[default]
    AnyGenerator,
    /// A word of length `k` may only use the first `k` generators.
    Indexed,
}

/// One letter of a word in a graphing: generator index and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn signed(&self) -> i64 {
        let g = self.generator as i64 + 1;
        if self.inverse {
            -g
        } else {
            g
        }
    }
}

/// An ordered list of bisections over one base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graphing {
    base: BaseSpace,
    bisections: Vec<PartialBijection>,
}

impl Graphing {
    pub fn new(base: BaseSpace, bisections: Vec<PartialBijection>) -> Result<Self> {
        for b in &bisections {
            base.check(&b.base)?;
        }
        Ok(Graphing { base, bisections })
    }

    pub fn empty(base: BaseSpace) -> Self {
        Graphing {
            base,
            bisections: Vec::new(),
        }
    }

    pub fn base(&self) -> BaseSpace {
        self.base
    }

    pub fn bisections(&self) -> &[PartialBijection] {
        &self.bisections
    }

    pub fn len(&self) -> usize {
        self.bisections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bisections.is_empty()
    }

    /// Total number of pairs over all bisections.
    pub fn pair_count(&self) -> usize {
        self.bisections.iter().map(PartialBijection::len).sum()
    }

    /// `Φ ∪ Φ⁻¹`, inverses appended after the originals.
    pub fn symmetrized(&self) -> Graphing {
        let mut bisections = self.bisections.clone();
        bisections.extend(self.bisections.iter().map(PartialBijection::invert));
        Graphing {
            base: self.base,
            bisections,
        }
    }

    /// Applies a word (letters applied right to left, like composition).
    pub fn evaluate(&self, word: &[Letter], x: usize) -> Option<usize> {
        word.iter().rev().try_fold(x, |p, l| {
            let b = self.bisections.get(l.generator)?;
            if l.inverse {
                b.forward.iter().find(|(_, &t)| t == p).map(|(&s, _)| s)
            } else {
                b.apply(p)
            }
        })
    }

    /// Labeled adjacency: for each point, the moves `(next, letter)`,
    /// restricted to the first `prefix` generators.
    pub(crate) fn adjacency(&self, prefix: usize) -> Vec<Vec<(usize, Letter)>> {
        let mut adj = vec![Vec::new(); self.base.size];
        for (i, b) in self.bisections.iter().enumerate().take(prefix) {
            for (s, t) in b.pairs() {
                adj[s].push((
                    t,
                    Letter {
                        generator: i,
                        inverse: false,
                    },
                ));
                adj[t].push((
                    s,
                    Letter {
                        generator: i,
                        inverse: true,
                    },
                ));
            }
        }
        adj
    }

    /// Connected components of the undirected graph with an edge `{x, φ(x)}`
    /// per pair. Each orbit is sorted; orbits are ordered by smallest point.
    pub fn orbit_partition(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.base.size);
        for b in &self.bisections {
            for (s, t) in b.pairs() {
                uf.union(s, t);
            }
        }
        uf.classes()
    }

    /// Word length from `x` to `y`, `None` when `y` is outside the orbit of `x`.
    pub fn word_length(&self, x: usize, y: usize, convention: LengthConvention) -> Option<usize> {
        if x == y {
            return Some(0);
        }
        match convention {
            LengthConvention::AnyGenerator => {
                bfs_word(&self.adjacency(self.len()), x, y, usize::MAX).map(|w| w.len())
            }
            LengthConvention::Indexed => {
                let total = self.len();
                for k in 1..=total {
                    if bfs_word(&self.adjacency(k), x, y, k).is_some() {
                        return Some(k);
                    }
                }
                // Past |Φ| the alphabet stops growing: the answer is max(|Φ|, d).
                bfs_word(&self.adjacency(total), x, y, usize::MAX).map(|w| w.len().max(total))
            }
        }
    }
}

/// Shortest word (by BFS) from `x` to `y` of length at most `max_len`.
/// Returned letters are in application order reversed, i.e. ready for
/// [`Graphing::evaluate`].
pub(crate) fn bfs_word(
    adj: &[Vec<(usize, Letter)>],
    x: usize,
    y: usize,
    max_len: usize,
) -> Option<Vec<Letter>> {
    if x == y {
        return Some(Vec::new());
    }
    let n = adj.len();
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[x] = 0;
    let mut queue = VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        if depth[u] >= max_len {
            continue;
        }
        for &(v, l) in &adj[u] {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                prev[v] = Some((u, l));
                if v == y {
                    let mut word = Vec::new();
                    let mut cur = y;
                    while let Some((p, l)) = prev[cur] {
                        word.push(l);
                        cur = p;
                    }
                    // word currently lists the last step first, which is the
                    // leftmost letter of the composed word.
                    return Some(word);
                }
                queue.push_back(v);
            }
        }
    }
    None
}

/// Isotropic part plus free parts, each with disjoint source and target sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub isotropic: BTreeSet<(usize, usize)>,
    pub free_parts: Vec<BTreeSet<(usize, usize)>>,
}

impl Decomposition {
    pub fn free_pair_count(&self) -> usize {
        self.free_parts.iter().map(BTreeSet::len).sum()
    }

    /// Checks the structural invariants against the decomposed bisection.
    pub fn is_valid_for(&self, phi: &PartialBijection) -> bool {
        let mut seen = BTreeSet::new();
        for &(s, t) in &self.isotropic {
            if s != t || !seen.insert((s, t)) {
                return false;
            }
        }
        for part in &self.free_parts {
            let sources: BTreeSet<_> = part.iter().map(|p| p.0).collect();
            if part.iter().any(|p| sources.contains(&p.1)) {
                return false;
            }
            for &p in part {
                if !seen.insert(p) {
                    return false;
                }
            }
        }
        seen == phi.pairs().collect()
    }
}

/// Splits `phi` into its fixed pairs and free parts `A_1, A_2, …`.
///
/// Each free part is built greedily as a maximal set of remaining pairs with
/// disjoint sources and targets, scanning by increasing source. A maximal part
/// blocks at most two other pairs per member, so it holds at least a third of
/// what remains, giving the `1 - (2/3)^k` prefix coverage.
pub fn fix_free_decompose(phi: &PartialBijection) -> Decomposition {
    let isotropic: BTreeSet<_> = phi.pairs().filter(|(s, t)| s == t).collect();
    let mut remaining: Vec<(usize, usize)> = phi.pairs().filter(|(s, t)| s != t).collect();
    let mut free_parts = Vec::new();
    while !remaining.is_empty() {
        let mut sources = BTreeSet::new();
        let mut targets = BTreeSet::new();
        let mut part = BTreeSet::new();
        let mut rest = Vec::new();
        for (s, t) in remaining {
            if !targets.contains(&s) && !sources.contains(&t) {
                sources.insert(s);
                targets.insert(t);
                part.insert((s, t));
            } else {
                rest.push((s, t));
            }
        }
        free_parts.push(part);
        remaining = rest;
    }
    Decomposition {
        isotropic,
        free_parts,
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}
