//! Benchmark inputs shared by the criterion suites.

use costbeta_core::generate;
use costbeta_core::UnlabeledGraph;

/// Simple Schreier graph of a seeded random action of the free group of
/// rank two.
pub fn f2_graph(n: usize, seed: u64) -> UnlabeledGraph {
    generate::random_schreier(2, n, seed)
        .expect("valid degree")
        .underlying_graph()
}

pub fn cycle(n: usize) -> UnlabeledGraph {
    generate::cycle(n).expect("n >= 3")
}
