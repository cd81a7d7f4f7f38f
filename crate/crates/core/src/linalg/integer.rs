use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rank over Q by fraction-free (Bareiss) elimination on big integers.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Nonzero invariant factors (positive, each dividing the next) of an
/// integer matrix, by Smith normal form reduction.
pub fn smith_invariants(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..m {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest nonzero of row t / column t to the pivot.
                let mut best = (t, t);
                for i in t..m {
                    if !a[i][t].is_zero()
                        && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs())
                    {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if !a[t][j].is_zero()
                        && (a[best.0][best.1].is_zero() || a[t][j].abs() < a[best.0][best.1].abs())
                    {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // Divisibility: fold a non-divisible row into row t.
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss() {
        assert_eq!(bareiss_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(bareiss_rank(&[vec![0, 1], vec![1, 0]]), 2);
        assert_eq!(bareiss_rank(&vec![vec![0; 5]; 5]), 0);
        assert_eq!(bareiss_rank(&[]), 0);
    }

    #[test]
    fn smith() {
        let d = smith_invariants(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert_eq!(smith_invariants(&[vec![2]]), vec![BigInt::from(2)]);
        assert!(smith_invariants(&[vec![0, 0]]).is_empty());
        let d = smith_invariants(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
    }
}
