//! Integer symmetric matrices as finite Laplace-type operators: exact kernel
//! dimension, approximate spectral measures, and the integrality argument
//! that bounds the mass of small nonzero eigenvalues.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::graph::UnlabeledGraph;
use crate::linalg::{rank_q, SparseIntMatrix};

/// Default size cap for the exact characteristic polynomial.
pub const CHARPOLY_CAP: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSymMatrix {
    k: usize,
    entries: Vec<i64>,
}

impl IntSymMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::input("matrix must have at least one row"));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::input(format!("row {i} has {} entries, expected {k}", r.len())));
            }
        }
        for i in 0..k {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::input(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(IntSymMatrix {
            k,
            entries: rows.concat(),
        })
    }

    pub fn zeros(k: usize) -> Self {
        IntSymMatrix {
            k,
            entries: vec![0; k * k],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..k {
            m.entries[i * k + i] = 1;
        }
        m
    }

    pub fn laplacian(g: &UnlabeledGraph) -> Self {
        IntSymMatrix::new(g.laplacian()).expect("graph Laplacians are symmetric")
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.k).map(<[i64]>::to_vec).collect()
    }

    /// `Tr(x²)`, the sum of squared entries.
    pub fn trace_of_square(&self) -> i128 {
        self.entries.iter().map(|&a| (a as i128) * (a as i128)).sum()
    }
}

/// `(dim ker x, dim ker x / k)`, from the exact rank over Q.
pub fn kernel_dim_exact(x: &IntSymMatrix) -> (usize, CostValue) {
    let m = SparseIntMatrix::from_dense(&x.rows());
    let dim = x.k - rank_q(&m);
    (dim, CostValue::count_over(dim, x.k))
}

/// All eigenvalues in increasing order, by Householder tridiagonalization
/// and Sturm-sequence bisection. Floating point; accurate to about `tol`.
pub fn eigenvalues(x: &IntSymMatrix, tol: f64) -> Vec<f64> {
    let (d, e) = tridiagonalize(x);
    let k = d.len();
    let radius = (0..k)
        .map(|i| {
            let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < k { e[i].abs() } else { 0.0 };
            (d[i].abs() + left + right, 0)
        })
        .fold(0.0f64, |m, (r, _)| m.max(r));
    let bound = radius + 1.0;
    (0..k)
        .map(|idx| {
            // Smallest x with more than idx eigenvalues below it.
            let (mut lo, mut hi) = (-bound, bound);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if sturm_count(&d, &e, mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn tridiagonalize(x: &IntSymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = x.k;
    let mut a: Vec<Vec<f64>> = x.rows().into_iter().map(|r| r.into_iter().map(|v| v as f64).collect()).collect();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k + 1][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for t in &mut v {
            *t /= vn;
        }
        let m = n - k - 1;
        let p: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| a[k + 1 + i][k + 1 + j] * v[j]).sum())
            .collect();
        let kk: f64 = (0..m).map(|i| v[i] * p[i]).sum();
        let q: Vec<f64> = (0..m).map(|i| p[i] - kk * v[i]).collect();
        for i in 0..m {
            for j in 0..m {
                a[k + 1 + i][k + 1 + j] -= 2.0 * (v[i] * q[j] + q[i] * v[j]);
            }
        }
        a[k + 1][k] = alpha;
        a[k][k + 1] = alpha;
        for i in k + 2..n {
            a[i][k] = 0.0;
            a[k][i] = 0.0;
        }
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    let e = (0..n.saturating_sub(1)).map(|i| a[i + 1][i]).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..d.len() {
        let off = if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 };
        q = d[i] - x - if i > 0 { off / q } else { 0.0 };
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralAtom {
    pub value: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBin {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

/// Spectral measure with mass `1/k` per eigenvalue. The atom at zero is
/// exact; everything else is floating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralHistogram {
    pub size: usize,
    pub kernel_dim: usize,
    pub zero_mass: CostValue,
    /// Nonzero eigenvalues grouped within `1e-8`.
    pub atoms: Vec<SpectralAtom>,
    pub bins: Vec<SpectralBin>,
    pub approximate: bool,
}

pub fn spectral_histogram(x: &IntSymMatrix, bins: usize) -> SpectralHistogram {
    let (kernel_dim, zero_mass) = kernel_dim_exact(x);
    let nonzero = nonzero_eigenvalues(x, kernel_dim);
    let w = 1.0 / x.k as f64;
    let mut atoms: Vec<SpectralAtom> = Vec::new();
    for &l in &nonzero {
        match atoms.last_mut() {
            Some(a) if (l - a.value).abs() <= 1e-8 => a.mass += w,
            _ => atoms.push(SpectralAtom { value: l, mass: w }),
        }
    }
    let mut hist = Vec::new();
    if bins > 0 && !nonzero.is_empty() {
        let lo = nonzero[0].min(0.0);
        let hi = nonzero[nonzero.len() - 1].max(0.0);
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        hist = (0..bins)
            .map(|b| SpectralBin {
                lo: lo + b as f64 * width,
                hi: lo + (b + 1) as f64 * width,
                mass: 0.0,
            })
            .collect();
        for &l in &nonzero {
            let b = (((l - lo) / width) as usize).min(bins - 1);
            hist[b].mass += w;
        }
    }
    SpectralHistogram {
        size: x.k,
        kernel_dim,
        zero_mass,
        atoms,
        bins: hist,
        approximate: true,
    }
}

/// Eigenvalues with the `kernel_dim` values closest to zero removed.
fn nonzero_eigenvalues(x: &IntSymMatrix, kernel_dim: usize) -> Vec<f64> {
    let eig = eigenvalues(x, 1e-12);
    let mut by_abs: Vec<usize> = (0..eig.len()).collect();
    by_abs.sort_by(|&a, &b| eig[a].abs().total_cmp(&eig[b].abs()));
    let mut drop = vec![false; eig.len()];
    for &i in by_abs.iter().take(kernel_dim) {
        drop[i] = true;
    }
    eig.into_iter()
        .zip(drop)
        .filter(|&(_, d)| !d)
        .map(|(l, _)| l)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LueckCheck {
    pub eps: f64,
    /// `μ([-ε, ε] \ {0})`.
    pub lhs: f64,
    /// `Tr(x²) / (k ln(1/ε))`.
    pub rhs: f64,
    pub pass: bool,
}

/// Checks `μ([-ε, ε] \ {0}) ≤ Tr(x²) / (k ln(1/ε))` for `0 < ε < 1`.
pub fn lueck_bound_check(x: &IntSymMatrix, eps: f64) -> Result<LueckCheck> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::input(format!("eps must lie in (0, 1), got {eps}")));
    }
    let (kernel_dim, _) = kernel_dim_exact(x);
    let eig = eigenvalues(x, 1e-12);
    let small = eig.iter().filter(|l| l.abs() <= eps).count();
    let k = x.k as f64;
    let lhs = (small as f64 - kernel_dim as f64) / k;
    let rhs = x.trace_of_square() as f64 / (k * (1.0 / eps).ln());
    Ok(LueckCheck {
        eps,
        lhs,
        rhs,
        pass: lhs <= rhs + 1e-9,
    })
}

/// Exact characteristic polynomial `det(λ - x)`, coefficients from the
/// constant term up, by the Faddeev–LeVerrier recursion over big integers.
pub fn characteristic_polynomial(x: &IntSymMatrix, cap: usize) -> Result<Vec<BigInt>> {
    let n = x.k;
    if n > cap {
        return Err(Error::SizeCap {
            solver: "characteristic_polynomial",
            detail: format!("size {n} exceeds cap {cap}"),
        });
    }
    let a: Vec<BigInt> = x.entries.iter().map(|&v| BigInt::from(v)).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut m = vec![BigInt::zero(); n * n];
    for j in 1..=n {
        // M_j = A M_{j-1} + c_{n-j+1} I
        let mut next = vec![BigInt::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                let mut s = BigInt::zero();
                for t in 0..n {
                    if !a[r * n + t].is_zero() && !m[t * n + c].is_zero() {
                        s += &a[r * n + t] * &m[t * n + c];
                    }
                }
                next[r * n + c] = s;
            }
        }
        for r in 0..n {
            next[r * n + r] += &coeffs[n - j + 1];
        }
        m = next;
        // c_{n-j} = -tr(A M_j) / j
        let mut tr = BigInt::zero();
        for r in 0..n {
            for t in 0..n {
                if !a[r * n + t].is_zero() {
                    tr += &a[r * n + t] * &m[t * n + r];
                }
            }
        }
        coeffs[n - j] = -tr / BigInt::from(j);
    }
    Ok(coeffs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonzeroProduct {
    /// `|c_m|` for the lowest nonzero coefficient `c_m`: the product of the
    /// absolute values of the nonzero eigenvalues.
    #[serde(serialize_with = "serialize_bigint")]
    pub product: BigInt,
    /// Degree of that coefficient; equals the kernel dimension.
    pub lowest_degree: usize,
    pub kernel_dim: usize,
    /// `ln(product)`, computed from the exact integer.
    pub log_exact: f64,
    /// `Σ_{λ ≠ 0} ln|λ|` from floating eigenvalues.
    pub log_sum: f64,
}

impl NonzeroProduct {
    /// The product is a nonzero integer and its degree matches the kernel.
    pub fn holds(&self) -> bool {
        self.product >= BigInt::from(1) && self.lowest_degree == self.kernel_dim
    }
}

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Natural log of a positive big integer.
pub fn ln_bigint(v: &BigInt) -> f64 {
    match v.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let shift = v.bits().saturating_sub(60);
            let top: BigInt = v >> shift;
            top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

pub fn nonzero_product_check(x: &IntSymMatrix) -> Result<NonzeroProduct> {
    let coeffs = characteristic_polynomial(x, CHARPOLY_CAP)?;
    let lowest_degree = coeffs.iter().position(|c| !c.is_zero()).expect("monic");
    let product = coeffs[lowest_degree].abs();
    let (kernel_dim, _) = kernel_dim_exact(x);
    let log_sum = nonzero_eigenvalues(x, kernel_dim)
        .iter()
        .map(|l| l.abs().ln())
        .sum();
    Ok(NonzeroProduct {
        log_exact: ln_bigint(&product),
        product,
        lowest_degree,
        kernel_dim,
        log_sum,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelRow {
    pub n: usize,
    pub size: usize,
    pub kernel_dim: usize,
    pub normalized: CostValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelSequenceReport {
    pub rows: Vec<KernelRow>,
    pub window: usize,
    pub tail_min: Option<CostValue>,
    pub tail_max: Option<CostValue>,
}

/// Normalized kernel dimensions along a sequence, with the range over the
/// last `window` entries. No limit is claimed.
pub fn kernel_sequence_report(xs: &[IntSymMatrix], window: usize) -> KernelSequenceReport {
    let rows: Vec<KernelRow> = xs
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let (kernel_dim, normalized) = kernel_dim_exact(x);
            KernelRow {
                n,
                size: x.k,
                kernel_dim,
                normalized,
            }
        })
        .collect();
    KernelSequenceReport::from_rows(rows, window)
}

impl KernelSequenceReport {
    pub fn from_rows(mut rows: Vec<KernelRow>, window: usize) -> Self {
        rows.sort_by_key(|r| r.n);
        let tail = &rows[rows.len().saturating_sub(window)..];
        KernelSequenceReport {
            tail_min: tail.iter().map(|r| r.normalized).min(),
            tail_max: tail.iter().map(|r| r.normalized).max(),
            window,
            rows,
        }
    }
}
