//! Exact rational arithmetic helpers.
//!
//! Every invariant in this crate is computed over arbitrary-precision
//! fractions; nothing is ever rounded through a float.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// The exact rational type used throughout the crate.
pub type Rat = BigRational;

/// Builds the fraction `num/den`.
///
/// Panics when `den == 0`; callers only pass literal denominators.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Returns `Some(k)` when `x` is a nonnegative integer fitting in `u64`.
pub fn as_u64(x: &Rat) -> Option<u64> {
    if x.is_integer() && !x.is_negative() {
        x.to_integer().to_u64()
    } else {
        None
    }
}

/// Returns `Some(k)` when `x` is an integer fitting in `i64`.
pub fn as_i64(x: &Rat) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Largest integer `<= x`.
pub fn floor_i64(x: &Rat) -> i64 {
    x.floor().to_integer().to_i64().expect("floor fits i64")
}

/// Decides `x <= sqrt(d)` exactly for `d >= 0`, without computing any root:
/// a negative left-hand side always passes, otherwise compare squares.
pub fn leq_sqrt(x: &Rat, d: &Rat) -> bool {
    debug_assert!(!d.is_negative());
    if x.is_negative() || x.is_zero() {
        return true;
    }
    x * x <= *d
}

/// Parses "p/q" or "p" (ASCII, optional surrounding whitespace).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Serde adapter rendering rationals as exact strings such as "4/5" or "-9".
pub mod rat_string {
    use super::{parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
