//! L-Lipschitz containment between graphings, Lipschitz cost solvers, and
//! combinatorial-cost tables over graph sequences.

mod ccost;
mod exact;
mod heuristic;

pub use ccost::{ccost_cell, ccost_table, CcostCell, CcostOptions, CcostTable, SolverMode};
pub use exact::{lip_cost_exact, ExactCaps};
pub use heuristic::{lip_cost_heuristic, HeuristicOptions};

use serde::Serialize;

use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::groupoid::{bfs_word, Graphing, LengthConvention, Letter};

/// A realizing word for one constrained pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    /// Index of the bisection of the embedded graphing.
    pub bisection: usize,
    pub source: usize,
    pub target: usize,
    /// Signed generator indices (`+i` / `-i`, 1-based), leftmost letter first.
    pub word: Vec<i64>,
    /// Length of the word under the chosen convention.
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LipWitness {
    pub convention: LengthConvention,
    pub entries: Vec<WitnessEntry>,
}

impl LipWitness {
    /// Re-evaluates every stored word on `phi`.
    pub fn verify(&self, phi: &Graphing, l: usize) -> bool {
        self.entries.iter().all(|e| {
            let word: Vec<Letter> = e
                .word
                .iter()
                .map(|&s| Letter {
                    generator: s.unsigned_abs() as usize - 1,
                    inverse: s < 0,
                })
                .collect();
            e.length <= l
                && word.len() <= e.length
                && (self.convention == LengthConvention::AnyGenerator
                    || word.iter().all(|x| x.generator < e.length))
                && phi.evaluate(&word, e.source) == Some(e.target)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmbedOptions {
    pub convention: LengthConvention,
    /// Require one word per bisection instead of one word per pair.
    /// This is stronger than piecewise containment.
    pub strict: bool,
}

/// Word-enumeration cap for strict mode.
const STRICT_WORD_CAP: usize = 2_000_000;

/// Decides whether `psi` L-Lipschitz embeds in `phi`; on success returns a
/// witness with one word per constrained pair (or per bisection in strict
/// mode, repeated for each of its pairs).
pub fn embeds(
    psi: &Graphing,
    phi: &Graphing,
    l: usize,
    opts: EmbedOptions,
) -> Result<Option<LipWitness>> {
    if psi.base() != phi.base() {
        return Err(Error::BaseMismatch {
            left: psi.base().size(),
            right: phi.base().size(),
        });
    }
    if opts.strict {
        return embeds_strict(psi, phi, l, opts.convention);
    }
    let full = phi.adjacency(phi.len());
    let prefixes: Vec<_> = match opts.convention {
        LengthConvention::AnyGenerator => Vec::new(),
        LengthConvention::Indexed => (0..=l.min(phi.len())).map(|k| phi.adjacency(k)).collect(),
    };
    let mut witness = LipWitness {
        convention: opts.convention,
        entries: Vec::new(),
    };
    for (bi, b) in psi.bisections().iter().enumerate() {
        for (x, y) in b.pairs() {
            let found = match opts.convention {
                LengthConvention::AnyGenerator => {
                    bfs_word(&full, x, y, l).map(|w| (w.len(), w))
                }
                LengthConvention::Indexed => indexed_word(&prefixes, &full, x, y, l),
            };
            let Some((length, word)) = found else {
                return Ok(None);
            };
            witness.entries.push(WitnessEntry {
                bisection: bi,
                source: x,
                target: y,
                word: word.iter().map(Letter::signed).collect(),
                length,
            });
        }
    }
    Ok(Some(witness))
}

fn indexed_word(
    prefixes: &[Vec<Vec<(usize, Letter)>>],
    full: &[Vec<(usize, Letter)>],
    x: usize,
    y: usize,
    l: usize,
) -> Option<(usize, Vec<Letter>)> {
    if x == y {
        return Some((0, Vec::new()));
    }
    for k in 1..=l {
        let adj = if k < prefixes.len() { &prefixes[k] } else { full };
        if let Some(w) = bfs_word(adj, x, y, k) {
            return Some((k, w));
        }
    }
    None
}

fn embeds_strict(
    psi: &Graphing,
    phi: &Graphing,
    l: usize,
    convention: LengthConvention,
) -> Result<Option<LipWitness>> {
    let letters = 2 * phi.len();
    let mut total: usize = 1;
    for _ in 0..l {
        total = total.saturating_mul(letters.max(1));
    }
    if total > STRICT_WORD_CAP {
        return Err(Error::SizeCap {
            solver: "strict embeds",
            detail: format!("{letters} letters to length {l}"),
        });
    }
    let mut witness = LipWitness {
        convention,
        entries: Vec::new(),
    };
    'bisection: for (bi, b) in psi.bisections().iter().enumerate() {
        let pairs: Vec<_> = b.pairs().collect();
        for len in 0..=l {
            let alphabet = match convention {
                LengthConvention::AnyGenerator => phi.len(),
                LengthConvention::Indexed => phi.len().min(len),
            };
            let mut found = None;
            for_each_word(alphabet, len, &mut |w| {
                if pairs.iter().all(|&(x, y)| phi.evaluate(w, x) == Some(y)) {
                    found = Some(w.to_vec());
                    true
                } else {
                    false
                }
            });
            if let Some(w) = found {
                for &(x, y) in &pairs {
                    witness.entries.push(WitnessEntry {
                        bisection: bi,
                        source: x,
                        target: y,
                        word: w.iter().map(Letter::signed).collect(),
                        length: len,
                    });
                }
                continue 'bisection;
            }
        }
        return Ok(None);
    }
    Ok(Some(witness))
}

/// Visits all words of exactly `len` letters over `alphabet` generators and
/// their inverses until `f` returns true.
fn for_each_word(alphabet: usize, len: usize, f: &mut dyn FnMut(&[Letter]) -> bool) -> bool {
    fn rec(
        alphabet: usize,
        len: usize,
        buf: &mut Vec<Letter>,
        f: &mut dyn FnMut(&[Letter]) -> bool,
    ) -> bool {
        if buf.len() == len {
            return f(buf);
        }
        for g in 0..alphabet {
            for inverse in [false, true] {
                buf.push(Letter {
                    generator: g,
                    inverse,
                });
                if rec(alphabet, len, buf, f) {
                    return true;
                }
                buf.pop();
            }
        }
        false
    }
    rec(alphabet, len, &mut Vec::with_capacity(len), f)
}

/// Unlabeled case: every edge of `sub` joins vertices at `sup`-distance ≤ `l`.
pub fn graph_embeds(sub: &UnlabeledGraph, sup: &UnlabeledGraph, l: usize) -> Result<bool> {
    if sub.vertex_count() != sup.vertex_count() {
        return Err(Error::BaseMismatch {
            left: sub.vertex_count(),
            right: sup.vertex_count(),
        });
    }
    for u in 0..sub.vertex_count() {
        let later: Vec<usize> = sub.neighbors(u).iter().copied().filter(|&v| v > u).collect();
        if later.is_empty() {
            continue;
        }
        let d = sup.distances_from(u, l);
        if later.iter().any(|&v| d[v] > l) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mutual L-Lipschitz embedding of two graphs on the same vertex set.
pub fn graph_lip_equivalent(a: &UnlabeledGraph, b: &UnlabeledGraph, l: usize) -> Result<bool> {
    Ok(graph_embeds(a, b, l)? && graph_embeds(b, a, l)?)
}

/// A feasible (or optimal) edge set and its cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LipSolution {
    pub cost: CostValue,
    pub edges: Vec<(usize, usize)>,
    pub exact: bool,
}
