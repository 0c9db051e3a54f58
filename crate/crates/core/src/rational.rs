//! Exact rationals, their `"p/q"` text form, and square-root helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Renders as `p/q`, or `p` when the denominator is 1.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact integer square root, if `v` is a perfect square.
pub fn exact_isqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Exact rational square root, if `r` is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    Some(Rational::new(exact_isqrt(r.numer())?, exact_isqrt(r.denom())?))
}

/// Writes `sqrt(r)` as `b * sqrt(rad)` with `rad` a square-free
/// non-negative integer and `b >= 0` rational.
pub fn simplify_sqrt(r: &Rational) -> (Rational, BigInt) {
    assert!(!r.is_negative(), "square root of a negative rational");
    if r.is_zero() {
        return (Rational::zero(), BigInt::zero());
    }
    // sqrt(p/q) = sqrt(p q) / q
    let pq = r.numer() * r.denom();
    let (outer, rad) = square_free_split(&pq);
    (Rational::new(outer, r.denom().clone()), rad)
}

/// `v = outer^2 * rad` with `rad` square-free, for `v > 0`.
fn square_free_split(v: &BigInt) -> (BigInt, BigInt) {
    let mut outer = BigInt::one();
    let mut rad = BigInt::one();
    let mut rest = v.clone();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            rad *= &p;
        }
        p += 1;
    }
    rad *= rest;
    (outer, rad)
}

pub fn sign(r: &Rational) -> Sign {
    r.numer().sign()
}

/// Serde adapters storing rationals as `"p/q"` strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
