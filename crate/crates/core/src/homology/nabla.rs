use super::complex::{FiberedComplex, FiniteComplex};
use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::linalg::Scalars;

/// Image dimension of `H_i(Σ) → H_i(Σ′)` for `Σ ⊆ Σ′`, computed as
/// `dim ker ∂_i + dim ker ∂′_{i+1} - dim ker((1-p)∂′_{i+1})`, where `p`
/// projects `i`-chains of `Σ′` onto the span of the `i`-cells of `Σ`.
///
/// Ordering the `i`-cells of `Σ′` with those of `Σ` first, a single
/// max-column elimination of `∂′_{i+1}` yields both ranks: pivots beyond
/// the `Σ` block are exactly the rank of `(1-p)∂′_{i+1}`.
pub fn nabla_fiber(
    sub: &FiniteComplex,
    sup: &FiniteComplex,
    i: usize,
    scalars: Scalars,
) -> Result<usize> {
    if !sub.is_subcomplex_of(sup) {
        return Err(Error::input("first complex is not a subcomplex of the second"));
    }
    let ker_sub = sub.count(i) - sub.boundary_ranks(i, scalars)[i];
    let cells = sup.count(i);
    let top = sup.count(i + 1);
    if top == 0 {
        return Ok(ker_sub);
    }
    let cycles_sup = cells - sup.boundary_ranks(i, scalars)[i];

    let mut relabel = vec![0u32; cells];
    let mut inside = 0u32;
    let mut outside = sub.count(i) as u32;
    for (j, c) in sup.cells_of(i).enumerate() {
        if sub.contains(c) {
            relabel[j] = inside;
            inside += 1;
        } else {
            relabel[j] = outside;
            outside += 1;
        }
    }
    let rows = sup.boundary_rows(i + 1, Some(&relabel), cells);
    let (rank, projected) = scalars.rank_profile(&rows, sub.count(i), cycles_sup);
    let ker_sup = top - rank;
    let ker_projected = top - projected;
    Ok(ker_sub + ker_sup - ker_projected)
}

/// Fiberwise image dimension averaged over the base.
pub fn nabla(sub: &FiberedComplex, sup: &FiberedComplex, i: usize) -> Result<CostValue> {
    nabla_over(sub, sup, i, Scalars::Rationals)
}

pub fn nabla_over(
    sub: &FiberedComplex,
    sup: &FiberedComplex,
    i: usize,
    scalars: Scalars,
) -> Result<CostValue> {
    if sub.base_size() != sup.base_size() {
        return Err(Error::BaseMismatch {
            left: sub.base_size(),
            right: sup.base_size(),
        });
    }
    let mut total = 0;
    for (a, b) in sub.fibers().iter().zip(sup.fibers()) {
        total += nabla_fiber(a, b, i, scalars)?;
    }
    Ok(CostValue::count_over(total, sub.base_size()))
}
