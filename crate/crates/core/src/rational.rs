//! Exact rational helpers shared by the table-producing modules.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

/// Signed exact rational. Used where values may be negative
/// (e.g. the first Elek form on a triangle).
pub type Rational = Ratio<i64>;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Serializes a rational as `"num/den"`.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    format!("{}/{}", r.numer(), r.denom()).serialize(s)
}
