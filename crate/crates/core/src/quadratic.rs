//! Exact elements `a + b * sqrt(rad)` of a real quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbasis::FScalar;
use crate::rational::{self, Rational};

/// `a + b * sqrt(rad)` with `rad` a square-free integer `>= 2`, or a
/// rational (`b = 0`, `rad = 0`).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadratic {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rad_str")]
    pub rad: BigInt,
}

mod rad_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Quadratic {
    pub fn rational(a: Rational) -> Self {
        Quadratic {
            a,
            b: Rational::zero(),
            rad: BigInt::zero(),
        }
    }

    pub fn int(v: i64) -> Self {
        Self::rational(rational::int(v))
    }

    /// `a + b * sqrt(r)` for any rational `r >= 0`, normalized.
    pub fn new(a: Rational, b: Rational, r: &Rational) -> Self {
        let (outer, rad) = rational::simplify_sqrt(r);
        let b = b * outer;
        if b.is_zero() || rad.is_zero() {
            return Self::rational(a);
        }
        if rad.is_one() {
            return Self::rational(a + b);
        }
        Quadratic { a, b, rad }
    }

    /// `sqrt(r)` for rational `r >= 0`.
    pub fn sqrt(r: &Rational) -> Self {
        Self::new(Rational::zero(), Rational::one(), r)
    }

    /// The roots `(s +- sqrt(disc)) / 2` of `x^2 - s x - t` where
    /// `disc = s^2 + 4t`; the larger root first.
    pub fn quadratic_roots(s: &Rational, disc: &Rational) -> (Self, Self) {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let a = s * &half;
        (
            Self::new(a.clone(), half.clone(), disc),
            Self::new(a, -half, disc),
        )
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Exact sign, decided without floating point.
    pub fn sign(&self) -> Sign {
        let sa = rational::sign(&self.a);
        let sb = rational::sign(&self.b);
        match (sa, sb) {
            (_, Sign::NoSign) => sa,
            (Sign::NoSign, _) => sb,
            (x, y) if x == y => x,
            _ => {
                // opposite signs: compare a^2 with b^2 rad
                let a2 = &self.a * &self.a;
                let b2r = &self.b * &self.b * Rational::from_integer(self.rad.clone());
                match a2.cmp(&b2r) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Sign::NoSign,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * self.rad.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    fn common_rad(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.rad.clone(),
            (_, true) => self.rad.clone(),
            _ => {
                assert_eq!(
                    self.rad, other.rad,
                    "arithmetic across different quadratic fields"
                );
                self.rad.clone()
            }
        }
    }

    fn normalized(a: Rational, b: Rational, rad: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Quadratic { a, b, rad }
        }
    }
}

impl Add for Quadratic {
    type Output = Quadratic;
    fn add(self, rhs: Quadratic) -> Quadratic {
        let rad = self.common_rad(&rhs);
        Quadratic::normalized(self.a + rhs.a, self.b + rhs.b, rad)
    }
}

impl Sub for Quadratic {
    type Output = Quadratic;
    fn sub(self, rhs: Quadratic) -> Quadratic {
        self + (-rhs)
    }
}

impl Neg for Quadratic {
    type Output = Quadratic;
    fn neg(self) -> Quadratic {
        Quadratic {
            a: -self.a,
            b: -self.b,
            rad: self.rad,
        }
    }
}

impl Mul for Quadratic {
    type Output = Quadratic;
    fn mul(self, rhs: Quadratic) -> Quadratic {
        let rad = self.common_rad(&rhs);
        let r = Rational::from_integer(rad.clone());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * r;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Quadratic::normalized(a, b, rad)
    }
}

impl FScalar for Quadratic {
    fn from_rational(r: &Rational) -> Self {
        Quadratic::rational(r.clone())
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let sqrt = if self.b.is_one() {
            format!("sqrt({})", self.rad)
        } else if self.b == -Rational::one() {
            format!("-sqrt({})", self.rad)
        } else {
            format!("{}*sqrt({})", self.b, self.rad)
        };
        if self.a.is_zero() {
            f.write_str(&sqrt)
        } else if self.b.is_negative() {
            write!(f, "{} - {}", self.a, sqrt.trim_start_matches('-'))
        } else {
            write!(f, "{} + {}", self.a, sqrt)
        }
    }
}

/// Parses the `Display` form: a rational, `[c*]sqrt(r)`, or
/// `a + [c*]sqrt(r)` / `a - [c*]sqrt(r)`.
impl FromStr for Quadratic {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a quadratic irrational: {text:?}"));
        let Some(open) = s.find("sqrt(") else {
            return Ok(Self::rational(rational::parse(&s)?));
        };
        let radicand = s[open + 5..].strip_suffix(')').ok_or_else(bad)?;
        let radicand = rational::parse(radicand)?;
        if radicand.is_negative() {
            return Err(bad());
        }
        let head = &s[..open];
        // split `head` into the rational part and the coefficient of the root
        let cut = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, coef) = match cut {
            Some(i) if !head[..i].ends_with('/') => (rational::parse(&head[..i])?, &head[i..]),
            _ => (Rational::zero(), head),
        };
        let coef = coef.strip_prefix('+').unwrap_or(coef);
        let b = match coef {
            "" => Rational::one(),
            "-" => -Rational::one(),
            c => rational::parse(c.strip_suffix('*').ok_or_else(bad)?)?,
        };
        Ok(Self::new(a, b, &radicand))
    }
}

impl fmt::Debug for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
