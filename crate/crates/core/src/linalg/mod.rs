//! Exact linear algebra: field abstractions, sparse echelon rank,
//! fraction-free dense rank and integer Smith normal form.

mod integer;
mod sparse;

pub use integer::{bareiss_rank, smith_invariants};
pub use sparse::{EchelonBasis, SparseIntMatrix};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Zero};

/// Arithmetic context for elimination. Operations return `None` on overflow
/// so that fixed-width backends can fall back to big integers.
pub trait Field {
    type Elem: Clone + std::fmt::Debug;

    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

/// Integers modulo a prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Option<Self> {
        (p >= 2 && p < (1 << 63) && is_prime(p)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = ((r as u128 * b as u128) % self.p as u128) as u64;
            }
            b = ((b as u128 * b as u128) % self.p as u128) as u64;
            e >>= 1;
        }
        r
    }
}

fn is_prime(p: u64) -> bool {
    if p < 4 {
        return p >= 2;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
        if d > 3_000_000 {
            // Large moduli: fall back to a deterministic Miller–Rabin.
            return miller_rabin(p);
        }
    }
    true
}

fn miller_rabin(n: u64) -> bool {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn mul(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(((*a as u128 * *b as u128) % self.p as u128) as u64)
    }
    fn sub(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(if a >= b { a - b } else { self.p - (b - a) })
    }
    fn div(&self, a: &u64, b: &u64) -> Option<u64> {
        let inv = self.pow(*b, self.p - 2);
        self.mul(a, &inv)
    }
}

/// Rationals with `i64` parts; reports overflow instead of wrapping.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmallRationals;

impl Field for SmallRationals {
    type Elem = Ratio<i64>;

    fn from_i64(&self, v: i64) -> Ratio<i64> {
        Ratio::from_integer(v)
    }
    fn is_zero(&self, a: &Ratio<i64>) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Ratio<i64>) -> bool {
        a.is_one()
    }
    fn mul(&self, a: &Ratio<i64>, b: &Ratio<i64>) -> Option<Ratio<i64>> {
        a.checked_mul(b)
    }
    fn sub(&self, a: &Ratio<i64>, b: &Ratio<i64>) -> Option<Ratio<i64>> {
        a.checked_sub(b)
    }
    fn div(&self, a: &Ratio<i64>, b: &Ratio<i64>) -> Option<Ratio<i64>> {
        a.checked_div(b)
    }
}

/// Arbitrary-precision rationals; never overflows.
#[derive(Debug, Clone, Copy, Default)]
pub struct BigRationals;

impl Field for BigRationals {
    type Elem = BigRational;

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a * b)
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a - b)
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            None
        } else {
            Some(a / b)
        }
    }
}

/// Scalar field for rank and homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scalars {
    #[default]
    Rationals,
    Prime(u64),
}

impl Scalars {
    pub fn parse(s: &str) -> Option<Scalars> {
        match s {
            "q" | "Q" => Some(Scalars::Rationals),
            _ => {
                let p = s.strip_prefix("fp:").or_else(|| s.strip_prefix("Fp:"))?;
                let p: u64 = p.parse().ok()?;
                PrimeField::new(p).map(|_| Scalars::Prime(p))
            }
        }
    }

    /// Exact rank of the span of `rows`.
    pub fn rank(&self, m: &SparseIntMatrix) -> usize {
        match self {
            Scalars::Rationals => rank_q(m),
            Scalars::Prime(p) => {
                let f = PrimeField::new(*p).expect("validated prime");
                sparse::rank_over(&f, m).expect("prime field never overflows")
            }
        }
    }
}

impl Scalars {
    /// `(rank, pivots at columns >= split)`, stopping at `limit`.
    pub fn rank_profile(&self, m: &SparseIntMatrix, split: usize, limit: usize) -> (usize, usize) {
        match self {
            Scalars::Rationals => sparse::profile_over(&SmallRationals, m, split, limit)
                .or_else(|| sparse::profile_over(&BigRationals, m, split, limit))
                .expect("big rationals never overflow"),
            Scalars::Prime(p) => {
                let f = PrimeField::new(*p).expect("validated prime");
                sparse::profile_over(&f, m, split, limit).expect("prime field never overflows")
            }
        }
    }

    /// Rank, stopping once it reaches `limit`.
    pub fn rank_bounded(&self, m: &SparseIntMatrix, limit: usize) -> usize {
        self.rank_profile(m, 0, limit).0
    }
}

impl std::fmt::Display for Scalars {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalars::Rationals => write!(f, "q"),
            Scalars::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// Exact rank over Q: `i64` rationals first, big rationals on overflow.
pub fn rank_q(m: &SparseIntMatrix) -> usize {
    match sparse::rank_over(&SmallRationals, m) {
        Some(r) => r,
        None => sparse::rank_over(&BigRationals, m).expect("big rationals never overflow"),
    }
}
