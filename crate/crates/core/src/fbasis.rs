//! The non-backtracking walk polynomials `F_i^(k)`.
//!
//! `F_0 = 1`, `F_1 = x`, `F_2 = x^2 - k` and
//! `F_i = x F_(i-1) - (k - 1) F_(i-2)` for `i >= 3`. For a connected
//! `k`-regular multigraph with adjacency `A`, entry `(u, v)` of `F_i(A)`
//! counts the non-backtracking walks of length `i` from `u` to `v`. The
//! walk enumerator in this module checks that identity independently.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::multigraph::Multigraph;
use crate::rational::{self, Rational};

/// Upper bound on `n * d^i` walk extensions the enumerator will attempt.
pub const ORACLE_CAP: u128 = 10_000_000;

/// Scalars the three-term recurrence can be evaluated over.
pub trait FScalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_rational(r: &Rational) -> Self;

    fn from_integer(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }
}

impl FScalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_integer(v: i64) -> Self {
        v as f64
    }
}

impl FScalar for BigRational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// `F_i^(k)` in the monomial basis; `monomial_coeffs[j]` multiplies `x^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPolynomial {
    pub k: u64,
    pub i: usize,
    pub monomial_coeffs: Vec<Rational>,
}

/// Coefficients `f_0..f_s` of `sum f_i F_i^(k)(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FBasisExpansion {
    pub k: u64,
    #[serde(with = "rational::serde_vec")]
    pub coeffs: Vec<Rational>,
}

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::DegreeTooSmall(k as usize));
    }
    Ok(())
}

/// Monomial coefficients of `F_0..=F_imax`.
fn f_monomials(k: u64, imax: usize) -> Vec<Vec<Rational>> {
    let kq = Rational::from_integer(BigInt::from(k));
    let km1 = Rational::from_integer(BigInt::from(k - 1));
    let mut out: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    if imax >= 1 {
        out.push(vec![Rational::zero(), Rational::one()]);
    }
    if imax >= 2 {
        out.push(vec![-kq, Rational::zero(), Rational::one()]);
    }
    for i in 3..=imax {
        let mut next = vec![Rational::zero(); i + 1];
        for (j, c) in out[i - 1].iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, c) in out[i - 2].iter().enumerate() {
            next[j] -= &km1 * c;
        }
        out.push(next);
    }
    out
}

pub fn f_poly(k: u64, i: usize) -> Result<FPolynomial> {
    check_k(k)?;
    let monomial_coeffs = f_monomials(k, i).pop().expect("at least F_0");
    Ok(FPolynomial {
        k,
        i,
        monomial_coeffs,
    })
}

/// Values `F_0(x), ..., F_imax(x)` by the recurrence.
pub fn f_values<T: FScalar>(k: u64, imax: usize, x: &T) -> Vec<T> {
    let kk = T::from_integer(k as i64);
    let km1 = T::from_integer(k as i64 - 1);
    let mut out = vec![T::from_integer(1)];
    if imax >= 1 {
        out.push(x.clone());
    }
    if imax >= 2 {
        out.push(x.clone() * x.clone() - kk);
    }
    for i in 3..=imax {
        let v = x.clone() * out[i - 1].clone() - km1.clone() * out[i - 2].clone();
        out.push(v);
    }
    out
}

/// `F_i^(k)(x)` evaluated by the three-term recurrence.
pub fn f_eval_scalar<T: FScalar>(k: u64, i: usize, x: T) -> Result<T> {
    check_k(k)?;
    Ok(f_values(k, i, &x).swap_remove(i))
}

fn regular_connected_degree(g: &Multigraph) -> Result<u64> {
    let k = g.regular_degree()?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    check_k(k)?;
    Ok(k)
}

/// `F_0(A), ..., F_imax(A)` by the matrix recurrence.
pub fn f_eval_matrices(g: &Multigraph, imax: usize) -> Result<Vec<IntMatrix>> {
    let k = regular_connected_degree(g)?;
    let n = g.order();
    let a = g.adjacency();
    let mut out = vec![IntMatrix::identity(n)];
    if imax >= 1 {
        out.push(a.clone());
    }
    if imax >= 2 {
        out.push(&(&a * &a) - &IntMatrix::identity(n).scale(&BigInt::from(k)));
    }
    let km1 = BigInt::from(k - 1);
    for i in 3..=imax {
        let next = &(&a * &out[i - 1]) - &out[i - 2].scale(&km1);
        out.push(next);
    }
    Ok(out)
}

pub fn f_eval_matrix(g: &Multigraph, i: usize) -> Result<IntMatrix> {
    Ok(f_eval_matrices(g, i)?.swap_remove(i))
}

/// Counts non-backtracking walks of length `i` by explicit enumeration.
///
/// Parallel edges and loops are distinct edge instances; a walk may not
/// traverse the same instance twice in a row. Independent of the
/// polynomial recurrence.
pub fn nb_walk_oracle(g: &Multigraph, i: usize) -> Result<IntMatrix> {
    let n = g.order();
    let max_deg = (0..n).map(|u| g.degree(u)).max().unwrap_or(0);
    let required = (n as u128).saturating_mul((max_deg as u128).saturating_pow(i as u32));
    if required > ORACLE_CAP {
        return Err(Error::SizeCapExceeded {
            required,
            cap: ORACLE_CAP,
        });
    }

    // (instance id, far endpoint) per vertex.
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut next_id = 0;
    for u in 0..n {
        for v in u..n {
            for _ in 0..g.entry(u, v) {
                incident[u].push((next_id, v));
                if u != v {
                    incident[v].push((next_id, u));
                }
                next_id += 1;
            }
        }
    }

    fn extend(
        incident: &[Vec<(usize, usize)>],
        at: usize,
        last: Option<usize>,
        remaining: usize,
        ends: &mut [u64],
    ) {
        if remaining == 0 {
            ends[at] += 1;
            return;
        }
        for &(id, w) in &incident[at] {
            if Some(id) != last {
                extend(incident, w, Some(id), remaining - 1, ends);
            }
        }
    }

    let mut out = IntMatrix::zeros(n);
    let mut ends = vec![0u64; n];
    for u in 0..n {
        ends.iter_mut().for_each(|e| *e = 0);
        extend(&incident, u, None, i, &mut ends);
        for (v, &c) in ends.iter().enumerate() {
            out[(u, v)] = BigInt::from(c);
        }
    }
    Ok(out)
}

/// Checks `F_i(A)` against the walk enumerator for every `1 <= i <= i_max`.
pub fn verify_nb_theorem(g: &Multigraph, i_max: usize) -> Result<bool> {
    let polys = f_eval_matrices(g, i_max)?;
    for (i, p) in polys.iter().enumerate().skip(1) {
        if *p != nb_walk_oracle(g, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rewrites a polynomial given by monomial coefficients in the `F^(k)` basis.
///
/// Each `F_i` is monic of degree `i`, so subtracting the leading
/// coefficient times `F_deg` from the top degree down is exact.
pub fn expand_in_f_basis(poly: &[Rational], k: u64) -> Result<FBasisExpansion> {
    check_k(k)?;
    let mut rest = poly.to_vec();
    while rest.len() > 1 && rest.last().is_some_and(Zero::is_zero) {
        rest.pop();
    }
    if rest.is_empty() {
        rest.push(Rational::zero());
    }
    let deg = rest.len() - 1;
    let basis = f_monomials(k, deg);
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for d in (0..=deg).rev() {
        let lead = rest[d].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, c) in basis[d].iter().enumerate() {
            rest[j] -= &lead * c;
        }
        coeffs[d] = lead;
    }
    debug_assert!(rest.iter().all(Zero::is_zero));
    Ok(FBasisExpansion { k, coeffs })
}

impl FBasisExpansion {
    pub fn new(k: u64, coeffs: Vec<Rational>) -> Result<Self> {
        check_k(k)?;
        Ok(FBasisExpansion { k, coeffs })
    }

    pub fn from_integers(k: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(k, coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    /// Index of the last basis polynomial.
    pub fn s(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `sum f_i F_i(x)`.
    pub fn eval<T: FScalar>(&self, x: &T) -> T {
        let values = f_values(self.k, self.s(), x);
        self.coeffs
            .iter()
            .zip(values)
            .fold(T::from_integer(0), |acc, (f, v)| acc + T::from_rational(f) * v)
    }

    pub fn to_monomial(&self) -> Vec<Rational> {
        let basis = f_monomials(self.k, self.s());
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (f, b) in self.coeffs.iter().zip(&basis) {
            for (j, c) in b.iter().enumerate() {
                out[j] += f * c;
            }
        }
        out
    }
}
