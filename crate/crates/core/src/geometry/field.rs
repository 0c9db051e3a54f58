//! Arithmetic in GF(p^e) with an explicit irreducible modulus.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, e)` with `q = p^e` and `p` prime, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Polynomials over GF(p), little-endian, without trailing zeros.
mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod_p(a: u64, p: u64) -> u64 {
        // p is prime, a != 0
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (p as i64, a as i64);
        while new_r != 0 {
            let quot = r / new_r;
            (t, new_t) = (new_t, t - quot * new_t);
            (r, new_r) = (new_r, r - quot * new_r);
        }
        t.rem_euclid(p as i64) as u64
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let db = b.len() - 1;
        let lead_inv = inv_mod_p(b[db], p);
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = rem[rem.len() - 1] * lead_inv % p;
            quot[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p - c * bi % p) % p;
            }
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }
}

/// Whether a monic polynomial of degree `e >= 1` is irreducible over GF(p),
/// by trial division against every monic polynomial of degree `<= e / 2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    for d in 1..=e / 2 {
        for n in 0..p.pow(d as u32) {
            let mut g = digits(n, p, d);
            g.push(1);
            if poly::divrem(f, &g, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Base-`p` digits of `n`, least significant first, padded to `len`.
fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for d in out.iter_mut() {
        *d = n % p;
        n /= p;
    }
    out
}

/// GF(p^e) presented as GF(p)[x] / (modulus).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    /// Monic, little-endian, length `e + 1`.
    pub modulus: Vec<u64>,
    pub q: u64,
}

/// Element of a [`FieldSpec`]: `e` little-endian coefficients in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GFElement {
    pub coeffs: Vec<u64>,
}

impl GFElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

/// Builds GF(p^e) with the smallest monic irreducible modulus, comparing
/// `(c_(e-1), ..., c_0)` as a base-`p` integer. For `e = 1` the modulus is `x`.
pub fn field_make(p: u64, e: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::PreconditionsNotMet("extension degree must be at least 1".into()));
    }
    let q = p.pow(e);
    let modulus = if e == 1 {
        vec![0, 1]
    } else {
        (0..q)
            .map(|n| {
                let mut f = digits(n, p, e as usize);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree")
    };
    Ok(FieldSpec { p, e, modulus, q })
}

/// Field of order `q`, or `NotPrimePower`.
pub fn field_of_order(q: u64) -> Result<FieldSpec> {
    let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    field_make(p, e)
}

impl FieldSpec {
    pub fn zero(&self) -> GFElement {
        GFElement {
            coeffs: vec![0; self.e as usize],
        }
    }

    pub fn one(&self) -> GFElement {
        self.element(1)
    }

    /// The element whose coefficient vector is the base-`p` expansion of
    /// `index`; indices `0..q` enumerate the field in its canonical order.
    pub fn element(&self, index: u64) -> GFElement {
        GFElement {
            coeffs: digits(index, self.p, self.e as usize),
        }
    }

    pub fn index(&self, a: &GFElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = GFElement> + '_ {
        (0..self.q).map(|i| self.element(i))
    }

    fn element_from_poly(&self, mut f: Vec<u64>) -> GFElement {
        f.resize(self.e as usize, 0);
        GFElement { coeffs: f }
    }

    pub fn add(&self, a: &GFElement, b: &GFElement) -> GFElement {
        GFElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GFElement) -> GFElement {
        GFElement {
            coeffs: a.coeffs.iter().map(|x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &GFElement, b: &GFElement) -> GFElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &GFElement, b: &GFElement) -> GFElement {
        let mut x = a.coeffs.clone();
        let mut y = b.coeffs.clone();
        poly::trim(&mut x);
        poly::trim(&mut y);
        let prod = poly::mul(&x, &y, self.p);
        self.element_from_poly(poly::divrem(&prod, &self.modulus, self.p).1)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in GF(p)[x].
    pub fn inv(&self, a: &GFElement) -> Result<GFElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let mut r0 = self.modulus.clone();
        let mut r1 = a.coeffs.clone();
        poly::trim(&mut r1);
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quot, rem) = poly::divrem(&r0, &r1, p);
            let s2 = poly::sub(&s0, &poly::mul(&quot, &s1, p), p);
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let c = poly::inv_mod_p(r0[0], p);
        let inv = poly::mul(&s0, &[c], p);
        Ok(self.element_from_poly(poly::divrem(&inv, &self.modulus, p).1))
    }

    pub fn pow(&self, a: &GFElement, mut e: u64) -> GFElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}
