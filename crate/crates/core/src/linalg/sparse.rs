use super::Field;

/// Integer matrix stored row by row; each row is a sorted list of
/// `(column, value)` with nonzero values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    ncols: usize,
    row_ptr: Vec<usize>,
    entries: Vec<(u32, i64)>,
}

impl SparseIntMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseIntMatrix {
            ncols,
            row_ptr: vec![0],
            entries: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = SparseIntMatrix::new(ncols);
        for r in rows {
            m.push_row(r.iter().enumerate().map(|(c, &v)| (c, v)));
        }
        m
    }

    /// Appends a row; entries are sorted, duplicates summed, zeros dropped.
    pub fn push_row(&mut self, row: impl IntoIterator<Item = (usize, i64)>) {
        let mut r: Vec<(u32, i64)> = row
            .into_iter()
            .inspect(|&(c, _)| assert!(c < self.ncols, "column {c} out of range"))
            .map(|(c, v)| (c as u32, v))
            .collect();
        r.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, i64)> = Vec::with_capacity(r.len());
        for (c, v) in r {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        self.entries.extend(merged.into_iter().filter(|e| e.1 != 0));
        self.row_ptr.push(self.entries.len());
    }

    pub fn nrows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(u32, i64)] {
        &self.entries[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(u32, i64)]> {
        (0..self.nrows()).map(|i| self.row(i))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.rows()
            .map(|r| {
                let mut d = vec![0; self.ncols];
                for &(c, v) in r {
                    d[c as usize] = v;
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows().enumerate() {
            for &(c, v) in r {
                cols[c as usize].push((i, v));
            }
        }
        let mut t = SparseIntMatrix::new(self.nrows());
        for c in cols {
            t.push_row(c);
        }
        t
    }

    /// Keeps only the listed columns, renumbered in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> SparseIntMatrix {
        let mut map = vec![usize::MAX; self.ncols];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut m = SparseIntMatrix::new(keep.len());
        for r in self.rows() {
            m.push_row(
                r.iter()
                    .filter(|e| map[e.0 as usize] != usize::MAX)
                    .map(|&(c, v)| (map[c as usize], v)),
            );
        }
        m
    }

    /// Dense product `self * other`.
    pub fn mul_dense(&self, other: &SparseIntMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.ncols, other.nrows());
        let mut out = vec![vec![0i64; other.ncols]; self.nrows()];
        for (i, r) in self.rows().enumerate() {
            for &(k, a) in r {
                for &(j, b) in other.row(k as usize) {
                    out[i][j as usize] += a * b;
                }
            }
        }
        out
    }
}

/// Row-echelon basis keyed by the largest column of each stored vector.
/// Stored vectors are normalized so their pivot entry is one.
pub struct EchelonBasis<'f, F: Field> {
    field: &'f F,
    pivots: Vec<Option<Vec<(u32, F::Elem)>>>,
    rank: usize,
}

impl<'f, F: Field> EchelonBasis<'f, F> {
    pub fn new(field: &'f F, ncols: usize) -> Self {
        EchelonBasis {
            field,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis. `None` signals arithmetic overflow.
    pub fn reduce(&self, mut v: Vec<(u32, F::Elem)>) -> Option<Vec<(u32, F::Elem)>> {
        let f = self.field;
        while let Some((c, a)) = v.last().cloned() {
            let Some(p) = &self.pivots[c as usize] else {
                break;
            };
            v = axpy(f, &v, &a, p)?;
        }
        Some(v)
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<(u32, F::Elem)>) -> Option<bool> {
        let v = self.reduce(v)?;
        let Some((c, a)) = v.last().cloned() else {
            return Some(false);
        };
        let f = self.field;
        let normalized = if f.is_one(&a) {
            v
        } else {
            v.into_iter()
                .map(|(col, x)| f.div(&x, &a).map(|y| (col, y)))
                .collect::<Option<Vec<_>>>()?
        };
        self.pivots[c as usize] = Some(normalized);
        self.rank += 1;
        Some(true)
    }

    pub fn insert_int(&mut self, row: &[(u32, i64)]) -> Option<bool> {
        let f = self.field;
        let v = row
            .iter()
            .map(|&(c, x)| (c, f.from_i64(x)))
            .filter(|(_, x)| !f.is_zero(x))
            .collect();
        self.insert(v)
    }
}

/// `v - a * p` for sorted sparse vectors; `p` has pivot coefficient one at
/// the same column as the last entry of `v`.
fn axpy<F: Field>(
    f: &F,
    v: &[(u32, F::Elem)],
    a: &F::Elem,
    p: &[(u32, F::Elem)],
) -> Option<Vec<(u32, F::Elem)>> {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        let take_v = j == p.len() || (i < v.len() && v[i].0 < p[j].0);
        let take_p = i == v.len() || (j < p.len() && p[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_p {
            let x = f.mul(a, &p[j].1)?;
            let y = f.sub(&f.from_i64(0), &x)?;
            out.push((p[j].0, y));
            j += 1;
        } else {
            let x = f.mul(a, &p[j].1)?;
            let y = f.sub(&v[i].1, &x)?;
            if !f.is_zero(&y) {
                out.push((v[i].0, y));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Rank of the row span over `field`; `None` on overflow.
pub(crate) fn rank_over<F: Field>(field: &F, m: &SparseIntMatrix) -> Option<usize> {
    let mut basis = EchelonBasis::new(field, m.ncols());
    for r in m.rows() {
        basis.insert_int(r)?;
    }
    Some(basis.rank())
}

/// Rank of the row span and the number of pivots at columns `>= split`,
/// stopping once the rank reaches `limit`. The pivot-column set of a
/// max-column echelon basis depends only on the span, so stopping early
/// does not change the split count. `None` on overflow.
pub(crate) fn profile_over<F: Field>(
    field: &F,
    m: &SparseIntMatrix,
    split: usize,
    limit: usize,
) -> Option<(usize, usize)> {
    let mut basis = EchelonBasis::new(field, m.ncols());
    let mut upper = 0;
    for r in m.rows() {
        if basis.rank() >= limit {
            break;
        }
        let v = r
            .iter()
            .map(|&(c, x)| (c, field.from_i64(x)))
            .filter(|(_, x)| !field.is_zero(x))
            .collect();
        let v = basis.reduce(v)?;
        if let Some(&(c, _)) = v.last() {
            if c as usize >= split {
                upper += 1;
            }
            basis.insert(v)?;
        }
    }
    Some((basis.rank(), upper))
}
