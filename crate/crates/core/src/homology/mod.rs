//! Finite simplicial complexes and fields of them: boundary matrices, exact
//! Betti numbers, Laplacian kernels, image dimensions of induced maps on
//! homology, and the Rips-complex tables built from them.

mod complex;
mod connectivity;
mod nabla;
mod rips;
mod tables;

pub use complex::{
    average_betti, betti, boundary_matrix, euler_characteristic, hodge_laplacian,
    laplacian_kernel_dim, HODGE_DENSE_CAP,
    FiberedComplex, FiniteComplex,
};
pub use connectivity::{local_connectivity, ConnectivityReport};
pub use nabla::{nabla, nabla_fiber, nabla_over};
pub use rips::{rips_complex, rips_complex_capped, DEFAULT_CELL_CAP};
pub use tables::{
    beta_d_cell, beta_d_table, elek_beta, elek_cell, BetaDCell, BetaDOptions, BetaDTable,
    ElekCell, ElekOptions,
    ElekTable,
};
