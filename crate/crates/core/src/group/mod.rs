//! Finitely presented groups acting on finite sets: Schreier graphs,
//! subgroup ranks, rank gradients and Farber/sofic deviations.

mod action;
mod deviation;
mod presentation;
mod rank;

pub use action::{schreier_graph, ActionDoc, PermutationAction, SchreierGraph};
pub use deviation::{farber_deviation, relator_deviation, RelatorDeviation};
pub use presentation::{GroupPresentation, Word};
pub use rank::{
    abelianized_rank_bounds, free_subgroup_rank, rank_gradient_row, rank_gradient_table, RankBounds,
    RankGradientRow,
    RankGradientTable,
};
