use std::cmp::Ordering;

use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::linalg::{Scalars, SparseIntMatrix};
use crate::spectral::IntSymMatrix;

/// A finite simplicial complex. Each `i`-cell is a strictly increasing
/// `(i+1)`-tuple of vertex ids; cells of one dimension are stored flat and
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiniteComplex {
    cells: Vec<Vec<u32>>,
}

impl FiniteComplex {
    /// Canonicalizes (sorts each tuple and each dimension) and checks that
    /// every face of every cell is present.
    pub fn new(cells: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let mut flat = Vec::with_capacity(cells.len());
        for (i, list) in cells.into_iter().enumerate() {
            let mut tuples = Vec::with_capacity(list.len());
            for mut c in list {
                if c.len() != i + 1 {
                    return Err(Error::input(format!(
                        "cell {c:?} listed in dimension {i} has {} vertices",
                        c.len()
                    )));
                }
                c.sort_unstable();
                if c.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::input(format!("cell {c:?} repeats a vertex")));
                }
                tuples.push(c);
            }
            tuples.sort_unstable();
            if tuples.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("duplicate cell in dimension {i}")));
            }
            flat.push(tuples.concat());
        }
        let k = FiniteComplex::from_sorted_flat(flat);
        k.check_closed()?;
        Ok(k)
    }

    /// The closure of a family of simplices.
    pub fn from_simplices(simplices: &[Vec<u32>]) -> Self {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = Vec::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            let m = s.len();
            for mask in 1u64..(1 << m) {
                let face: Vec<u32> = (0..m).filter(|j| mask >> j & 1 == 1).map(|j| s[j]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(face);
            }
        }
        FiniteComplex::from_sorted_flat(
            by_dim
                .into_iter()
                .map(|set| set.into_iter().flatten().collect())
                .collect(),
        )
    }

    /// Trusted constructor: each dimension already flat, sorted and closed.
    pub(crate) fn from_sorted_flat(mut cells: Vec<Vec<u32>>) -> Self {
        while cells.last().is_some_and(|c| c.is_empty()) {
            cells.pop();
        }
        FiniteComplex { cells }
    }

    fn check_closed(&self) -> Result<()> {
        for i in 1..self.cells.len() {
            let mut face = Vec::with_capacity(i);
            for c in self.cells_of(i) {
                for skip in 0..=i {
                    face.clear();
                    face.extend(c.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
                    if self.index_of(&face).is_none() {
                        return Err(Error::input(format!(
                            "face {face:?} of cell {c:?} is missing"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Top dimension with a cell, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn count(&self, i: usize) -> usize {
        self.cells.get(i).map_or(0, |c| c.len() / (i + 1))
    }

    pub fn total_cells(&self) -> usize {
        (0..self.cells.len()).map(|i| self.count(i)).sum()
    }

    pub fn cell(&self, i: usize, j: usize) -> &[u32] {
        &self.cells[i][j * (i + 1)..(j + 1) * (i + 1)]
    }

    pub fn cells_of(&self, i: usize) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        let s: &[u32] = self.cells.get(i).map_or(&[], Vec::as_slice);
        s.chunks_exact(i + 1)
    }

    /// Position of a sorted tuple within its dimension.
    pub fn index_of(&self, cell: &[u32]) -> Option<usize> {
        let i = cell.len().checked_sub(1)?;
        let n = self.count(i);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.cell(i, mid).cmp(cell) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, cell: &[u32]) -> bool {
        self.index_of(cell).is_some()
    }

    pub fn is_subcomplex_of(&self, other: &FiniteComplex) -> bool {
        (0..self.cells.len()).all(|i| self.cells_of(i).all(|c| other.contains(c)))
    }

    /// All cells as nested vectors, dimension by dimension.
    pub fn to_nested(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.cells.len())
            .map(|i| self.cells_of(i).map(<[u32]>::to_vec).collect())
            .collect()
    }

    /// Keeps cells of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> FiniteComplex {
        FiniteComplex::from_sorted_flat(self.cells.iter().take(d + 1).cloned().collect())
    }

    /// Boundary of each `i`-cell as a sparse row over the `(i-1)`-cells
    /// (the transpose of the boundary matrix). Column indices may be remapped
    /// through `relabel`.
    pub(crate) fn boundary_rows(
        &self,
        i: usize,
        relabel: Option<&[u32]>,
        ncols: usize,
    ) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::new(ncols);
        if i == 0 {
            for _ in 0..self.count(0) {
                m.push_row(std::iter::empty());
            }
            return m;
        }
        let mut face = Vec::with_capacity(i);
        let mut row = Vec::with_capacity(i + 1);
        for c in self.cells_of(i) {
            row.clear();
            for skip in 0..=i {
                face.clear();
                face.extend(c.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
                let idx = self.index_of(&face).expect("closed complex");
                let col = relabel.map_or(idx, |r| r[idx] as usize);
                row.push((col, if skip % 2 == 0 { 1 } else { -1 }));
            }
            m.push_row(row.iter().copied());
        }
        m
    }

    /// Ranks of `∂_1, …, ∂_{top}` in order, each elimination stopping at the
    /// dimension of the cycle space below it.
    pub(crate) fn boundary_ranks(&self, top: usize, scalars: Scalars) -> Vec<usize> {
        let mut ranks = vec![0usize; top + 1];
        for i in 1..=top {
            if self.count(i) == 0 {
                continue;
            }
            let cycles = self.count(i - 1) - ranks[i - 1];
            ranks[i] = scalars
                .rank_bounded(&self.boundary_rows(i, None, self.count(i - 1)), cycles);
        }
        ranks
    }
}

/// `∂_i` with rows indexed by `(i-1)`-cells and columns by `i`-cells, in the
/// sorted-vertex orientation: the face omitting the `j`-th vertex carries
/// sign `(-1)^j`.
pub fn boundary_matrix(k: &FiniteComplex, i: usize) -> Result<SparseIntMatrix> {
    if i == 0 {
        return Err(Error::input("boundary index must be at least 1"));
    }
    Ok(k.boundary_rows(i, None, k.count(i - 1)).transpose())
}

/// `dim ker ∂_i - rank ∂_{i+1}` over the given field.
pub fn betti(k: &FiniteComplex, i: usize, scalars: Scalars) -> usize {
    if k.count(i) == 0 {
        return 0;
    }
    let ranks = k.boundary_ranks(i + 1, scalars);
    k.count(i) - ranks[i] - ranks[i + 1]
}

/// Hodge Laplacian `∂_iᵀ∂_i + ∂_{i+1}∂_{i+1}ᵀ` on `i`-chains, as sparse rows.
fn hodge_rows(k: &FiniteComplex, i: usize) -> SparseIntMatrix {
    let n = k.count(i);
    let mut lap = vec![std::collections::BTreeMap::<usize, i64>::new(); n];
    let mut add_outer = |m: &SparseIntMatrix| {
        for v in m.rows() {
            for &(a, x) in v {
                for &(b, y) in v {
                    *lap[a as usize].entry(b as usize).or_default() += x * y;
                }
            }
        }
    };
    if i > 0 {
        // Rows of the transposed down-boundary are the rows of ∂_i.
        add_outer(&k.boundary_rows(i, None, k.count(i - 1)).transpose());
    }
    if k.count(i + 1) > 0 {
        add_outer(&k.boundary_rows(i + 1, None, n));
    }
    let mut m = SparseIntMatrix::new(n);
    for row in lap {
        m.push_row(row.into_iter().filter(|&(_, v)| v != 0));
    }
    m
}

/// Largest Hodge Laplacian materialized as a dense matrix.
pub const HODGE_DENSE_CAP: usize = 4000;

/// The Hodge Laplacian in dimension `i` as a dense integer matrix.
pub fn hodge_laplacian(k: &FiniteComplex, i: usize) -> Result<IntSymMatrix> {
    let n = k.count(i);
    if n > HODGE_DENSE_CAP {
        return Err(Error::SizeCap {
            solver: "hodge_laplacian",
            detail: format!("{n} cells exceeds cap {HODGE_DENSE_CAP}"),
        });
    }
    if n == 0 {
        return Err(Error::input(format!("no cells in dimension {i}")));
    }
    IntSymMatrix::new(hodge_rows(k, i).to_dense())
}

/// Kernel dimension of the Hodge Laplacian over Q, by exact rank.
pub fn laplacian_kernel_dim(k: &FiniteComplex, i: usize) -> usize {
    let n = k.count(i);
    if n == 0 {
        return 0;
    }
    n - crate::linalg::rank_q(&hodge_rows(k, i))
}

/// `Σ (-1)^i #i-cells`.
pub fn euler_characteristic(k: &FiniteComplex) -> i64 {
    (0..=k.dim().unwrap_or(0))
        .map(|i| if i % 2 == 0 { 1 } else { -1 } * k.count(i) as i64)
        .sum()
}

/// A field of finite complexes over a finite base space: one fiber per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedComplex {
    fibers: Vec<FiniteComplex>,
}

impl FiberedComplex {
    pub fn new(fibers: Vec<FiniteComplex>) -> Result<Self> {
        if fibers.is_empty() {
            return Err(Error::input("a fibered complex needs at least one fiber"));
        }
        Ok(FiberedComplex { fibers })
    }

    /// The same complex over every point of an `n`-point base.
    pub fn constant(k: FiniteComplex, n: usize) -> Result<Self> {
        Self::new(vec![k; n])
    }

    pub fn base_size(&self) -> usize {
        self.fibers.len()
    }

    pub fn fibers(&self) -> &[FiniteComplex] {
        &self.fibers
    }

    pub fn fiber(&self, x: usize) -> &FiniteComplex {
        &self.fibers[x]
    }
}

/// `(1/|X|) Σ_x b_i(Σ[x])` over Q.
pub fn average_betti(f: &FiberedComplex, i: usize) -> CostValue {
    let total: usize = f.fibers.iter().map(|k| betti(k, i, Scalars::Rationals)).sum();
    CostValue::count_over(total, f.base_size())
}
