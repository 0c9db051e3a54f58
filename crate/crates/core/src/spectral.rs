//! Spectra of regular multigraphs.
//!
//! The exact path looks for rationals `(s, t, c)` with
//! `A^2 = s A + t I + c J`. For a connected `k`-regular graph such an
//! identity, with `A` outside the span of `I` and `J`, pins the spectrum to
//! `k` and the two roots of `x^2 - s x - t`; multiplicities then follow from
//! the trace. Irrational roots stay symbolic as `(s +- sqrt(s^2 + 4t)) / 2`,
//! so sign tests on `tau1 + tau2 = s` are exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::quadratic::Quadratic;
use crate::rational::{self, Rational};
use crate::report::{self, Check};

pub const DEFAULT_JACOBI_TOL: f64 = 1e-12;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// Exact witness that a connected regular multigraph has exactly three
/// distinct eigenvalues `k > tau1`, `tau1 > tau2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeEigCertificate {
    pub s: Rational,
    pub t: Rational,
    pub c: Rational,
    pub k: u64,
    pub n: usize,
    /// `s^2 + 4t`; the roots are rational iff this is a rational square.
    pub discriminant: Rational,
    pub tau1: Quadratic,
    pub tau2: Quadratic,
    pub m1: u64,
    pub m2: u64,
}

/// Wire form `{"s","t","c","k","n","tau_sum","tau_prod","multiplicities"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(with = "rational::serde_str")]
    pub s: Rational,
    #[serde(with = "rational::serde_str")]
    pub t: Rational,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    pub k: u64,
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub tau_sum: Rational,
    #[serde(with = "rational::serde_str")]
    pub tau_prod: Rational,
    pub multiplicities: [u64; 2],
}

impl ThreeEigCertificate {
    pub fn tau_sum(&self) -> &Rational {
        &self.s
    }

    pub fn tau_prod(&self) -> Rational {
        -self.t.clone()
    }

    pub fn has_rational_eigenvalues(&self) -> bool {
        rational::exact_sqrt(&self.discriminant).is_some()
    }

    /// `(k - tau1)(k - tau2) = k^2 - s k - t`.
    pub fn hoffman_constant(&self) -> Rational {
        let k = rational::int(self.k as i64);
        &k * &k - &self.s * &k - &self.t
    }

    /// Distinct eigenvalues with multiplicities, largest first.
    pub fn eigenvalues(&self) -> [(Quadratic, u64); 3] {
        [
            (Quadratic::int(self.k as i64), 1),
            (self.tau1.clone(), self.m1),
            (self.tau2.clone(), self.m2),
        ]
    }

    /// Re-checks `n (A^2 - (tau1 + tau2) A + tau1 tau2 I) = (k - tau1)(k - tau2) J`
    /// entrywise against `g`.
    pub fn hoffman_identity_holds(&self, g: &Multigraph) -> bool {
        if g.order() != self.n {
            return false;
        }
        let a = g.adjacency();
        let a2 = &a * &a;
        let n = rational::int(self.n as i64);
        let rhs = self.hoffman_constant();
        (0..self.n).all(|u| {
            (0..self.n).all(|v| {
                let delta = if u == v { Rational::one() } else { Rational::zero() };
                let lhs = Rational::from_integer(a2[(u, v)].clone())
                    - &self.s * Rational::from_integer(a[(u, v)].clone())
                    - &self.t * delta;
                &n * lhs == rhs
            })
        })
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            s: self.s.clone(),
            t: self.t.clone(),
            c: self.c.clone(),
            k: self.k,
            n: self.n,
            tau_sum: self.tau_sum().clone(),
            tau_prod: self.tau_prod(),
            multiplicities: [self.m1, self.m2],
        }
    }
}

/// Parameters `(n, k, lambda, mu)` of a strongly regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

/// Floating-point eigenvalues clustered into `(value, multiplicity)` pairs,
/// largest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxSpectrum {
    pub eigenvalues: Vec<(f64, usize)>,
    pub tol: f64,
}

impl ApproxSpectrum {
    pub fn distinct(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&(v, _)| v).collect()
    }
}

fn connected_regular(g: &Multigraph) -> Result<u64> {
    let k = g.regular_degree()?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(k)
}

/// Unique solution of the consistent system `rows * x = rhs` in three
/// unknowns, or `None` when it is inconsistent or underdetermined.
fn solve3(equations: &[([Rational; 3], Rational)]) -> Option<[Rational; 3]> {
    let mut m: Vec<Vec<Rational>> = equations
        .iter()
        .map(|(row, rhs)| {
            let mut r = row.to_vec();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..3 {
        let Some(p) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..4 {
                    let delta = &f * &m[pivot_row][j];
                    m[r][j] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|r| !r[3].is_zero()) || pivots.len() < 3 {
        return None;
    }
    Some([m[0][3].clone(), m[1][3].clone(), m[2][3].clone()])
}

/// Exact certificate of three distinct eigenvalues, or `None`.
pub fn certify_three_eigenvalues(g: &Multigraph) -> Result<Option<ThreeEigCertificate>> {
    let k = connected_regular(g)?;
    let n = g.order();
    let a = g.adjacency();
    let a2 = &a * &a;

    // Every entry gives s*A[u][v] + t*delta + c = A^2[u][v]; only distinct
    // equations matter.
    let mut seen = std::collections::BTreeSet::new();
    let mut equations = Vec::new();
    for u in 0..n {
        for v in u..n {
            let key = (a[(u, v)].clone(), u == v, a2[(u, v)].clone());
            if seen.insert(key) {
                let delta = if u == v { Rational::one() } else { Rational::zero() };
                equations.push((
                    [Rational::from_integer(a[(u, v)].clone()), delta, Rational::one()],
                    Rational::from_integer(a2[(u, v)].clone()),
                ));
            }
        }
    }
    let Some([s, t, c]) = solve3(&equations) else {
        return Ok(None);
    };

    // Full entrywise verification.
    let holds = (0..n).all(|u| {
        (0..n).all(|v| {
            let delta = if u == v { Rational::one() } else { Rational::zero() };
            &s * Rational::from_integer(a[(u, v)].clone()) + &t * delta + &c
                == Rational::from_integer(a2[(u, v)].clone())
        })
    });
    if !holds {
        return Ok(None);
    }

    let kr = rational::int(k as i64);
    let hoffman = &kr * &kr - &s * &kr - &t;
    if hoffman.is_zero() || &c * rational::int(n as i64) != hoffman {
        // k is a root of x^2 - s x - t
        return Ok(None);
    }
    let discriminant = &s * &s + rational::int(4) * &t;
    if !discriminant.is_positive() {
        return Ok(None);
    }
    let (tau1, tau2) = Quadratic::quadratic_roots(&s, &discriminant);

    let rest = (n - 1) as i64;
    let trace_rest = rational::int(g.trace() as i64) - &kr;
    let (m1, m2) = match (tau1.as_rational(), tau2.as_rational()) {
        (Some(t1), Some(t2)) => {
            let m1 = (&trace_rest - t2 * rational::int(rest)) / (t1 - t2);
            if !m1.is_integer() {
                return Ok(None);
            }
            let m1 = m1.to_integer();
            let m2 = BigInt::from(rest) - &m1;
            match (m1.to_u64(), m2.to_u64()) {
                (Some(m1), Some(m2)) => (m1, m2),
                _ => return Ok(None),
            }
        }
        _ => {
            // Conjugate roots must have equal multiplicity.
            if rest.is_odd() || &s * rational::int(rest) != rational::int(2) * &trace_rest {
                return Ok(None);
            }
            ((rest / 2) as u64, (rest / 2) as u64)
        }
    };
    if m1 == 0 || m2 == 0 {
        return Ok(None);
    }

    Ok(Some(ThreeEigCertificate {
        s,
        t,
        c,
        k,
        n,
        discriminant,
        tau1,
        tau2,
        m1,
        m2,
    }))
}

/// Strongly regular parameters of a simple connected regular graph.
pub fn srg_params(g: &Multigraph) -> Result<Option<SrgParams>> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let k = connected_regular(g)?;
    let n = g.order();
    let a = g.adjacency();
    let a2 = &a * &a;
    let mut lambda = None;
    let mut mu = None;
    for u in 0..n {
        for v in u + 1..n {
            let slot = if g.entry(u, v) == 1 { &mut lambda } else { &mut mu };
            if slot.is_none() {
                *slot = a2[(u, v)].to_u64();
            }
        }
    }
    let (Some(lambda), Some(mu)) = (lambda, mu) else {
        return Ok(None);
    };
    // A^2 = k I + lambda A + mu (J - I - A)
    let ok = (0..n).all(|u| {
        (0..n).all(|v| {
            let expect = if u == v {
                k
            } else if g.entry(u, v) == 1 {
                lambda
            } else {
                mu
            };
            a2[(u, v)] == BigInt::from(expect)
        })
    });
    Ok(ok.then_some(SrgParams {
        n: n as u64,
        k,
        lambda,
        mu,
    }))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `tol * ||A||_F`, then runs one more sweep.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>, tol: f64) -> Vec<f64> {
    let n = a.len();
    let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; n];
    }
    let off = |a: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut extra_sweep = true;
    for _ in 0..100 {
        if off(&a) < tol * norm {
            if !extra_sweep {
                break;
            }
            extra_sweep = false;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Sorts descending and merges values within `radius` of their neighbour.
fn cluster(mut values: Vec<f64>, radius: f64) -> Vec<(f64, usize)> {
    values.sort_by(|x, y| y.total_cmp(x));
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in values {
        match groups.last_mut() {
            Some(g) if (g[g.len() - 1] - v).abs() <= radius => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| (g.iter().sum::<f64>() / g.len() as f64, g.len()))
        .collect()
}

pub fn approx_spectrum_with(g: &Multigraph, jacobi_tol: f64, cluster_tol: f64) -> ApproxSpectrum {
    let rows = g
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as f64).collect())
        .collect();
    ApproxSpectrum {
        eigenvalues: cluster(jacobi_eigenvalues(rows, jacobi_tol), cluster_tol),
        tol: jacobi_tol,
    }
}

/// Jacobi to `tol`, merging eigenvalues within `10 * tol`.
pub fn approx_spectrum(g: &Multigraph, tol: f64) -> ApproxSpectrum {
    approx_spectrum_with(g, tol, 10.0 * tol)
}

/// Jacobi to `1e-12` with clusters merged at `1e-9`.
pub fn approx_spectrum_default(g: &Multigraph) -> ApproxSpectrum {
    approx_spectrum_with(g, DEFAULT_JACOBI_TOL, DEFAULT_CLUSTER_TOL)
}

/// Whether `l_v^2 - (tau1 + tau2 + 1) l_v` equals
/// `(k - tau1)(k - tau2) / n - k - tau1 tau2` at every vertex.
pub fn loop_consistency(g: &Multigraph, cert: &ThreeEigCertificate) -> bool {
    let n = rational::int(cert.n as i64);
    let k = rational::int(cert.k as i64);
    let rhs = cert.hoffman_constant() / n - k - cert.tau_prod();
    let coeff = cert.tau_sum() + Rational::one();
    (0..g.order()).all(|v| {
        let l = rational::int(i64::from(g.loops(v)));
        &l * &l - &coeff * &l == rhs
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub q: u64,
    pub conditions: Vec<Check>,
}

impl ExtremalReport {
    pub fn all_pass(&self) -> bool {
        report::all_pass(&self.conditions)
    }
}

/// The four necessary conditions for a three-eigenvalue graph of order
/// `q^2 + q + 1`, evaluated against a given certificate.
pub fn extremal_conditions_for(g: &Multigraph, cert: &ThreeEigCertificate) -> ExtremalReport {
    let n = g.order();
    ExtremalReport {
        q: cert.k.saturating_sub(1),
        conditions: vec![
            Check::new("has a loop", g.trace() > 0),
            Check::new("no multiple edge", !g.has_multi_edge()),
            Check::new(
                "every vertex has at most one loop",
                (0..n).all(|v| g.loops(v) <= 1),
            ),
            Check::new("tau1 + tau2 = 0", cert.tau_sum().is_zero()),
        ],
    }
}

/// Checks the necessary conditions on a certified graph of extremal order.
pub fn extremal_necessary_conditions(g: &Multigraph) -> Result<ExtremalReport> {
    let cert = certify_three_eigenvalues(g)?.ok_or_else(|| {
        Error::PreconditionsNotMet("graph has no three-eigenvalue certificate".into())
    })?;
    let q = cert.k - 1;
    let extremal = q * q + q + 1;
    if g.order() as u64 != extremal {
        return Err(Error::PreconditionsNotMet(format!(
            "order {} differs from q^2 + q + 1 = {extremal} for q = {q}",
            g.order()
        )));
    }
    Ok(extremal_conditions_for(g, &cert))
}
