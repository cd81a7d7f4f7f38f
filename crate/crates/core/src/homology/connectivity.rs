use serde::Serialize;

use super::nabla::nabla_fiber;
use super::rips::{rips_on_subset, DEFAULT_CELL_CAP};
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::linalg::Scalars;

/// Local `(N, M; k)` connectivity of a Rips complex, checked in homology:
/// around each vertex `v`, the map from the Rips complex on the `N`-ball to
/// the one on the `M`-ball must kill reduced homology in degrees `0..=k`.
/// Homology vanishing is a proxy for the homotopy-theoretic condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub q: usize,
    pub inner_radius: usize,
    pub outer_radius: usize,
    pub k: usize,
    pub vertices: usize,
    pub passing: usize,
    /// `(vertex, lowest degree with a surviving class)`.
    pub failures: Vec<(usize, usize)>,
}

pub fn local_connectivity(
    g: &UnlabeledGraph,
    q: usize,
    inner_radius: usize,
    outer_radius: usize,
    k: usize,
) -> Result<ConnectivityReport> {
    if inner_radius > outer_radius {
        return Err(Error::input("inner radius exceeds outer radius"));
    }
    let mut failures = Vec::new();
    for v in 0..g.vertex_count() {
        let d = g.distances_from(v, outer_radius);
        let inner: Vec<usize> = (0..g.vertex_count()).filter(|&w| d[w] <= inner_radius).collect();
        let outer: Vec<usize> = (0..g.vertex_count()).filter(|&w| d[w] <= outer_radius).collect();
        let x = rips_on_subset(g, &inner, q, k + 1, DEFAULT_CELL_CAP)?;
        let y = rips_on_subset(g, &outer, q, k + 1, DEFAULT_CELL_CAP)?;
        for deg in 0..=k {
            let image = nabla_fiber(&x, &y, deg, Scalars::Rationals)?;
            // Reduced homology: one class in degree 0 always survives.
            let surviving = if deg == 0 { image.saturating_sub(1) } else { image };
            if surviving > 0 {
                failures.push((v, deg));
                break;
            }
        }
    }
    Ok(ConnectivityReport {
        q,
        inner_radius,
        outer_radius,
        k,
        vertices: g.vertex_count(),
        passing: g.vertex_count() - failures.len(),
        failures,
    })
}
