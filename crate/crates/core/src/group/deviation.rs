use serde::Serialize;

use super::action::PermutationAction;
use crate::groupoid::Letter;
use crate::rational::{serialize_rational, Rational};

/// Largest fraction of points fixed by a nonempty freely reduced word of
/// length at most `r`. Counting fixed points of `w` on `Γ/Γ_n` is the same as
/// counting cosets `gΓ_n` with `w ∈ gΓ_n g⁻¹`.
pub fn farber_deviation(a: &PermutationAction, r: usize) -> Rational {
    let n = a.degree();
    let s = a.presentation().rank();
    if r == 0 || s == 0 {
        return Rational::from_integer(0);
    }
    let letters: Vec<Letter> = (0..s)
        .flat_map(|g| {
            [false, true].map(|inverse| Letter {
                generator: g,
                inverse,
            })
        })
        .collect();
    let identity: Vec<usize> = (0..n).collect();
    let mut best = 0usize;
    // Depth-first over words built by prepending letters: `state[x] = w(x)`.
    let mut stack: Vec<(Vec<usize>, Option<Letter>, usize)> = vec![(identity, None, 0)];
    while let Some((state, first, len)) = stack.pop() {
        if len == r {
            continue;
        }
        for &l in &letters {
            if let Some(f) = first {
                if f.generator == l.generator && f.inverse != l.inverse {
                    continue;
                }
            }
            let next: Vec<usize> = state.iter().map(|&y| a.apply_letter(l, y)).collect();
            let fixed = next.iter().enumerate().filter(|&(x, &y)| x == y).count();
            best = best.max(fixed);
            if best == n {
                return Rational::from_integer(1);
            }
            stack.push((next, Some(l), len + 1));
        }
    }
    Rational::new(best as i64, n as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelatorDeviation {
    /// Largest fraction of points moved by a relator.
    #[serde(serialize_with = "serialize_rational")]
    pub relator_part: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub farber_part: Rational,
}

/// How far a labeled graph (one permutation per generator, relators not
/// enforced) is from a free action of the presented group: relators should
/// fix every point and short words should fix few.
pub fn relator_deviation(a: &PermutationAction, r: usize) -> RelatorDeviation {
    let n = a.degree();
    let moved = a
        .presentation()
        .relators()
        .iter()
        .map(|w| (0..n).filter(|&v| a.apply_word(w, v) != v).count())
        .max()
        .unwrap_or(0);
    RelatorDeviation {
        relator_part: Rational::new(moved as i64, n as i64),
        farber_part: farber_deviation(a, r),
    }
}
