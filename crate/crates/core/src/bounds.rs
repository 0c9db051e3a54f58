//! Order bounds for regular multigraphs, each returned as a report that
//! keeps failed hypotheses instead of raising.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::fbasis::{f_eval_matrices, FBasisExpansion};
use crate::geometry::field::prime_power;
use crate::multigraph::Multigraph;
use crate::quadratic::Quadratic;
use crate::rational::{self, Rational};
use crate::report::{self, Check};
use crate::spectral::SrgParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Moore,
    Lp,
    Harmonic,
    ThreeEv,
    SrgIdentity,
    BruckRyser,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Exact(Rational),
    Verdict(String),
    /// Hypotheses failed, so no bound follows.
    Undetermined,
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => write!(f, "{r}"),
            BoundValue::Verdict(v) => f.write_str(v),
            BoundValue::Undetermined => f.write_str("none"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `{"name": str, "value": str, "hypotheses": [...], "inputs": {...}}`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub value: BoundValue,
    pub hypotheses: Vec<Check>,
    pub inputs: serde_json::Value,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        report::all_pass(&self.hypotheses)
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        match &self.value {
            BoundValue::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// `k_0 = 1`, `k_i = k (k - 1)^(i - 1)`: non-backtracking walks of length
/// `i` leaving a vertex.
pub fn walk_volume(k: u64, i: usize) -> BigInt {
    if i == 0 {
        BigInt::one()
    } else {
        BigInt::from(k) * BigInt::from(k - 1).pow(i as u32 - 1)
    }
}

/// `1 + k * sum_{i < d} (k - 1)^i`.
pub fn moore_bound(k: u64, d: u32) -> BigInt {
    (0..=d as usize).map(|i| walk_volume(k, i)).sum()
}

pub fn moore_report(k: u64, d: u32) -> BoundReport {
    BoundReport {
        name: BoundName::Moore,
        value: BoundValue::Exact(Rational::from_integer(moore_bound(k, d))),
        hypotheses: vec![Check::new("k >= 2", k >= 2), Check::new("d >= 1", d >= 1)],
        inputs: json!({"k": k, "d": d}),
    }
}

/// Verifies the hypotheses of the linear-programming bound
/// `n <= f(k) / f_0` for the given non-trivial eigenvalues.
pub fn lp_bound_verify(k: u64, eigenvalues: &[Quadratic], f: &FBasisExpansion) -> BoundReport {
    let kq = Quadratic::int(k as i64);
    let mut hypotheses = vec![
        Check::new("f is expanded over the same k", f.k == k),
        Check::new(
            "eigenvalues exclude k",
            eigenvalues.iter().all(|t| *t != kq),
        ),
    ];
    let f0 = f.coeffs.first().cloned().unwrap_or_else(Rational::zero);
    hypotheses.push(Check::new("f_0 > 0", f0.is_positive()));
    hypotheses.push(Check::new(
        "f_i >= 0 for i >= 1",
        f.coeffs.iter().skip(1).all(|c| !c.is_negative()),
    ));
    let fk = f.eval(&kq);
    hypotheses.push(Check::new("f(k) > 0", fk.sign() == Sign::Plus));
    for tau in eigenvalues {
        hypotheses.push(Check::new(
            format!("f({tau}) <= 0"),
            f.eval(tau).sign() != Sign::Plus,
        ));
    }
    let value = if report::all_pass(&hypotheses) {
        // f(k) is rational since k is.
        BoundValue::Exact(fk.a / f0)
    } else {
        BoundValue::Undetermined
    };
    BoundReport {
        name: BoundName::Lp,
        value,
        hypotheses,
        inputs: json!({
            "k": k,
            "eigenvalues": eigenvalues,
            "f": f.coeffs.iter().map(rational::to_string).collect::<Vec<_>>(),
        }),
    }
}

fn harmonic_value(k: u64, f: &FBasisExpansion) -> Rational {
    let total: BigInt = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_positive())
        .map(|(i, _)| walk_volume(k, i))
        .sum();
    Rational::from_integer(total)
}

/// Harmonic absolute bound `n <= sum_{f_i > 0} k_i`. Positivity of `F(A)`
/// depends on the graph and is recorded as asserted by the caller.
pub fn harmonic_bound(k: u64, f: &FBasisExpansion) -> BoundReport {
    BoundReport {
        name: BoundName::Harmonic,
        value: BoundValue::Exact(harmonic_value(k, f)),
        hypotheses: vec![
            Check::new("f is expanded over the same k", f.k == k),
            Check::new("F(A) is entrywise positive (asserted by caller)", true),
        ],
        inputs: json!({
            "k": k,
            "f": f.coeffs.iter().map(rational::to_string).collect::<Vec<_>>(),
        }),
    }
}

/// Harmonic bound with the positivity of `F(A)` checked on `g` itself.
pub fn harmonic_bound_for_graph(g: &Multigraph, f: &FBasisExpansion) -> BoundReport {
    let mut report = harmonic_bound(f.k, f);
    let positive = match f_eval_matrices(g, f.s()) {
        Ok(mats) => {
            let n = g.order();
            (0..n).all(|u| {
                (0..n).all(|v| {
                    let entry: Rational = f
                        .coeffs
                        .iter()
                        .zip(&mats)
                        .map(|(c, m)| c * Rational::from_integer(m[(u, v)].clone()))
                        .sum();
                    entry.is_positive()
                })
            })
        }
        Err(_) => false,
    };
    report.hypotheses[1] = Check::new("F(A) is entrywise positive", positive);
    report.inputs["n"] = json!(g.order());
    report
}

pub const MOORE_EXCEPTIONS: [u64; 4] = [2, 3, 7, 57];

/// Largest possible order of a connected `k`-regular multigraph with three
/// distinct eigenvalues: `q^2 + q + 1` with `q = k - 1`, except for the
/// possible Moore-graph degrees where it is `k^2 + 1`.
pub fn three_ev_bound(k: u64) -> BoundReport {
    let q = k.saturating_sub(1);
    let mut hypotheses = vec![Check::new("k >= 2", k >= 2)];
    let value = if MOORE_EXCEPTIONS.contains(&k) {
        let note = match known_nonexistence(Structure::MooreGraph(k)) {
            Existence::Unknown => {
                format!("k = {k}: Moore graph existence unknown; diameter-2 Moore bound k^2 + 1 applies")
            }
            _ => format!("k = {k}: Moore graph exists; diameter-2 Moore bound k^2 + 1 applies"),
        };
        hypotheses.push(Check::new(note, true));
        BigInt::from(k) * BigInt::from(k) + 1
    } else {
        hypotheses.push(Check::new(
            "k not in {2, 3, 7, 57}: no Moore graph of degree k",
            true,
        ));
        BigInt::from(q) * BigInt::from(q) + BigInt::from(q) + 1
    };
    BoundReport {
        name: BoundName::ThreeEv,
        value: BoundValue::Exact(Rational::from_integer(value)),
        hypotheses,
        inputs: json!({"k": k}),
    }
}

/// Checks `n = k + 1 + (k^2 - lambda k - k) / mu`, and for `mu >= 2`,
/// `k >= 3` the chain `n <= k^2/2 + k/2 + 1 <= q^2 + q + 1`.
pub fn srg_identity(params: SrgParams) -> BoundReport {
    let SrgParams { n, k, lambda, mu } = params;
    let r = |v: u64| rational::int(v as i64);
    let mut hypotheses = vec![Check::new("mu >= 1", mu >= 1)];
    let value = if mu >= 1 {
        let rhs = r(k) + r(1) + (r(k) * r(k) - r(lambda) * r(k) - r(k)) / r(mu);
        hypotheses.push(Check::new(
            format!("n = k + 1 + (k^2 - lambda k - k) / mu = {rhs}"),
            rhs == r(n),
        ));
        if mu >= 2 && k >= 3 {
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let middle = r(k) * r(k) * &half + r(k) * &half + r(1);
            let q = r(k - 1);
            let extremal = &q * &q + &q + r(1);
            hypotheses.push(Check::new(
                format!("n <= k^2/2 + k/2 + 1 = {middle}"),
                r(n) <= middle,
            ));
            let last = if middle == extremal {
                format!("k^2/2 + k/2 + 1 <= q^2 + q + 1 = {extremal} (equality, attained only for (n, k) = (7, 3))")
            } else {
                format!("k^2/2 + k/2 + 1 <= q^2 + q + 1 = {extremal}")
            };
            hypotheses.push(Check::new(last, middle <= extremal));
        }
        BoundValue::Exact(rhs)
    } else {
        BoundValue::Undetermined
    };
    BoundReport {
        name: BoundName::SrgIdentity,
        value,
        hypotheses,
        inputs: json!({"n": n, "k": k, "lambda": lambda, "mu": mu}),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BruckRyser {
    Infeasible,
    Passes,
    NotApplicable,
}

impl fmt::Display for BruckRyser {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BruckRyser::Infeasible => "infeasible",
            BruckRyser::Passes => "passes",
            BruckRyser::NotApplicable => "not_applicable",
        })
    }
}

pub fn is_sum_of_two_squares(q: u64) -> bool {
    let mut a = 0u64;
    while a * a <= q {
        let rest = q - a * a;
        let b = (rest as f64).sqrt() as u64;
        if (b.saturating_sub(1)..=b + 1).any(|b| b * b == rest) {
            return true;
        }
        a += 1;
    }
    false
}

/// Bruck–Ryser test for a projective plane of order `q`.
pub fn bruck_ryser(q: u64) -> BruckRyser {
    match q % 4 {
        1 | 2 if is_sum_of_two_squares(q) => BruckRyser::Passes,
        1 | 2 => BruckRyser::Infeasible,
        _ => BruckRyser::NotApplicable,
    }
}

pub fn bruck_ryser_report(q: u64) -> BoundReport {
    BoundReport {
        name: BoundName::BruckRyser,
        value: BoundValue::Verdict(bruck_ryser(q).to_string()),
        hypotheses: vec![
            Check::new("q >= 2", q >= 2),
            Check::new("q = 1 or 2 (mod 4)", matches!(q % 4, 1 | 2)),
        ],
        inputs: json!({"q": q}),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// A Moore graph of diameter 2 and degree `k`.
    MooreGraph(u64),
    /// A projective plane of order `q`.
    Plane(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Exists,
    Nonexistent,
    Unknown,
}

/// Existence facts taken from the literature, not derived here.
pub fn known_nonexistence(kind: Structure) -> Existence {
    match kind {
        Structure::MooreGraph(2 | 3 | 7) => Existence::Exists,
        Structure::MooreGraph(57) => Existence::Unknown,
        Structure::MooreGraph(_) => Existence::Nonexistent,
        Structure::Plane(q) if q >= 2 && prime_power(q).is_some() => Existence::Exists,
        Structure::Plane(10) => Existence::Nonexistent,
        Structure::Plane(q) if q >= 2 && bruck_ryser(q) == BruckRyser::Infeasible => {
            Existence::Nonexistent
        }
        Structure::Plane(_) => Existence::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn moore_examples() {
        assert_eq!(moore_bound(3, 2), BigInt::from(10));
        assert_eq!(moore_bound(7, 2), BigInt::from(50));
        for k in 2..10 {
            assert_eq!(moore_bound(k, 1), BigInt::from(k + 1));
        }
    }

    #[test]
    fn lp_examples() {
        let f = FBasisExpansion::from_integers(3, &[1, 0, 1]).unwrap();
        let r2 = Quadratic::sqrt(&int(2));
        let rep = lp_bound_verify(3, &[r2.clone(), -r2], &f);
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.exact_value(), Some(&int(7)));

        let rep = lp_bound_verify(3, &[Quadratic::int(2), Quadratic::int(-2)], &f);
        assert!(!rep.holds());
        assert_eq!(rep.value, BoundValue::Undetermined);
        let failed: Vec<_> = rep.hypotheses.iter().filter(|c| !c.pass).collect();
        let names: Vec<&str> = failed.iter().map(|c| c.condition.as_str()).collect();
        assert_eq!(names, ["f(2) <= 0", "f(-2) <= 0"]);
    }

    #[test]
    fn harmonic_examples() {
        for q in 2..10u64 {
            let f = FBasisExpansion::from_integers(q + 1, &[1, 0, 1]).unwrap();
            assert_eq!(
                harmonic_bound(q + 1, &f).exact_value(),
                Some(&int((q * q + q + 1) as i64))
            );
        }
        let f = FBasisExpansion::from_integers(3, &[1]).unwrap();
        assert_eq!(harmonic_bound(3, &f).exact_value(), Some(&int(1)));
    }

    #[test]
    fn three_ev_examples() {
        assert_eq!(three_ev_bound(4).exact_value(), Some(&int(13)));
        assert_eq!(three_ev_bound(7).exact_value(), Some(&int(50)));
        assert_eq!(three_ev_bound(3).exact_value(), Some(&int(10)));
        assert_eq!(three_ev_bound(11).exact_value(), Some(&int(111)));
        let r57 = three_ev_bound(57);
        assert_eq!(r57.exact_value(), Some(&int(57 * 57 + 1)));
        assert!(r57.hypotheses[1].condition.contains("unknown"));
    }

    #[test]
    fn srg_identity_examples() {
        let p = srg_identity(SrgParams { n: 10, k: 3, lambda: 0, mu: 1 });
        assert!(p.holds());
        assert_eq!(p.exact_value(), Some(&int(10)));
        let c5 = srg_identity(SrgParams { n: 5, k: 2, lambda: 0, mu: 1 });
        assert!(c5.holds());
        let eq = srg_identity(SrgParams { n: 7, k: 3, lambda: 0, mu: 2 });
        assert!(eq.hypotheses[1].pass);
        assert_eq!(eq.hypotheses.len(), 4);
        assert!(eq.hypotheses[3].condition.contains("(n, k) = (7, 3)"));
        let bad = srg_identity(SrgParams { n: 11, k: 3, lambda: 0, mu: 1 });
        assert!(!bad.holds());
        let zero_mu = srg_identity(SrgParams { n: 4, k: 3, lambda: 2, mu: 0 });
        assert_eq!(zero_mu.value, BoundValue::Undetermined);
    }

    #[test]
    fn bruck_ryser_examples() {
        assert_eq!(bruck_ryser(14), BruckRyser::Infeasible);
        assert_eq!(bruck_ryser(6), BruckRyser::Infeasible);
        assert_eq!(bruck_ryser(10), BruckRyser::Passes);
        assert_eq!(bruck_ryser(5), BruckRyser::Passes);
        assert_eq!(bruck_ryser(3), BruckRyser::NotApplicable);
        assert_eq!(bruck_ryser(12), BruckRyser::NotApplicable);
        assert_eq!(bruck_ryser_report(14).value.to_string(), "infeasible");
    }

    #[test]
    fn sum_of_two_squares_brute_force() {
        for q in 0..500u64 {
            let brute = (0..=q).any(|a| (0..=q).any(|b| a * a + b * b == q));
            assert_eq!(is_sum_of_two_squares(q), brute, "q = {q}");
        }
    }

    #[test]
    fn literature_facts() {
        assert_eq!(known_nonexistence(Structure::MooreGraph(4)), Existence::Nonexistent);
        assert_eq!(known_nonexistence(Structure::MooreGraph(57)), Existence::Unknown);
        assert_eq!(known_nonexistence(Structure::MooreGraph(7)), Existence::Exists);
        assert_eq!(known_nonexistence(Structure::Plane(10)), Existence::Nonexistent);
        assert_eq!(known_nonexistence(Structure::Plane(14)), Existence::Nonexistent);
        assert_eq!(known_nonexistence(Structure::Plane(9)), Existence::Exists);
        assert_eq!(known_nonexistence(Structure::Plane(12)), Existence::Unknown);
    }

    #[test]
    fn report_json_shape() {
        let v: serde_json::Value = serde_json::from_str(&three_ev_bound(11).to_json()).unwrap();
        assert_eq!(v["name"], "three_ev");
        assert_eq!(v["value"], "111");
        assert_eq!(v["inputs"]["k"], 11);
        assert!(v["hypotheses"][0]["pass"].as_bool().unwrap());
    }
}
