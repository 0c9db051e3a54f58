use std::collections::VecDeque;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use spectra_core::bounds::{
    harmonic_bound, lp_bound_verify, moore_bound, srg_identity, three_ev_bound,
};
use spectra_core::fbasis::{expand_in_f_basis, f_eval_matrix, FBasisExpansion};
use spectra_core::geometry::{
    field_of_order, incidence_graph, plane_incidence, polarity_graph, prime_power, verify_plane_axioms,
};
use spectra_core::matrix::IntMatrix;
use spectra_core::quadratic::Quadratic;
use spectra_core::rational::{int, Rational};
use spectra_core::search::{canonical_form, enumerate, SearchSpec};
use spectra_core::spectral::{approx_spectrum_default, certify_three_eigenvalues, srg_params};
use spectra_core::{Girth, Multigraph};

fn pool() -> &'static [Multigraph] {
    static POOL: OnceLock<Vec<Multigraph>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for (k, n) in [(2, 7), (3, 8), (4, 6)] {
            out.extend(enumerate(&SearchSpec::new(k, 1, n).loops(true).multi(true)).unwrap());
        }
        out.extend(enumerate(&SearchSpec::new(3, 1, 10)).unwrap());
        out.extend(enumerate(&SearchSpec::new(4, 5, 8)).unwrap());
        for q in [2, 3, 4, 5] {
            out.push(polarity_graph(&field_of_order(q).unwrap()));
        }
        out
    })
}

fn pooled() -> impl Strategy<Value = Multigraph> {
    (0..pool().len()).prop_map(|i| pool()[i].clone())
}

fn simple_pooled() -> impl Strategy<Value = Multigraph> {
    let simple: Vec<Multigraph> = pool().iter().filter(|g| g.is_simple()).cloned().collect();
    prop::sample::select(simple)
}

fn symmetric(max_n: usize, max_entry: u32) -> impl Strategy<Value = Multigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(0..=max_entry, n * (n + 1) / 2).prop_map(move |upper| {
            let mut m = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i..n {
                    let x = i64::from(it.next().unwrap());
                    m[i][j] = x;
                    m[j][i] = x;
                }
            }
            Multigraph::from_matrix(&m).unwrap()
        })
    })
}

fn is_bipartite(g: &Multigraph) -> bool {
    let n = g.order();
    let mut color = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if g.entry(u, v) == 0 {
                    continue;
                }
                match color[v] {
                    None => {
                        color[v] = Some(!color[u].unwrap());
                        queue.push_back(v);
                    }
                    Some(c) if c == color[u].unwrap() => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

fn k_i(k: u64, i: usize) -> BigInt {
    if i == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(k) * BigInt::from(k - 1).pow(i as u32 - 1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn adjacency_is_symmetric(g in pooled()) {
        let n = g.order();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(g.entry(u, v), g.entry(v, u));
            }
        }
    }

    #[test]
    fn chapman_kolmogorov(g in symmetric(5, 2), i in 0u32..4, j in 0u32..4) {
        let n = g.order();
        for u in 0..n {
            for v in 0..n {
                let lhs = g.walk_count(u, v, i + j).unwrap();
                let rhs: BigInt = (0..n)
                    .map(|w| g.walk_count(u, w, i).unwrap() * g.walk_count(w, v, j).unwrap())
                    .sum();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn bipartite_double_is_bipartite(g in symmetric(6, 2)) {
        let d = g.bipartite_double();
        prop_assert_eq!(d.order(), 2 * g.order());
        prop_assert_eq!(d.trace(), 0);
        prop_assert!(is_bipartite(&d));
    }

    #[test]
    fn degree_shift_touches_only_the_diagonal(g in pooled(), t in 0u32..4) {
        let h = g.degree_shift(t).unwrap();
        let n = g.order();
        for u in 0..n {
            for v in 0..n {
                let want = g.entry(u, v) + if u == v { t } else { 0 };
                prop_assert_eq!(h.entry(u, v), want);
            }
        }
    }

    #[test]
    fn girth_one_and_two(g in symmetric(6, 2)) {
        let multi = (0..g.order()).any(|u| (0..g.order()).any(|v| u != v && g.entry(u, v) >= 2));
        prop_assert_eq!(g.girth() == Girth::Finite(1), g.trace() > 0);
        prop_assert_eq!(g.girth() == Girth::Finite(2), g.trace() == 0 && multi);
    }

    #[test]
    fn f_basis_round_trip(
        k in 2u64..8,
        coeffs in prop::collection::vec((-20i64..20, 1i64..6), 1..=7),
    ) {
        let poly: Vec<Rational> = coeffs
            .iter()
            .map(|&(p, q)| Rational::new(p.into(), q.into()))
            .collect();
        let f = expand_in_f_basis(&poly, k).unwrap();
        let mut back = f.to_monomial();
        let mut want = poly.clone();
        for v in [&mut back, &mut want] {
            while v.last().is_some_and(Zero::is_zero) {
                v.pop();
            }
        }
        prop_assert_eq!(back, want);
    }

    #[test]
    fn f_matrices_count_walks(g in pooled(), i in 0usize..6) {
        let k = g.regular_degree().unwrap();
        let f = f_eval_matrix(&g, i).unwrap();
        let n = g.order();
        for u in 0..n {
            prop_assert!(f.row(u).iter().all(|x| !x.is_negative()));
            let sum: BigInt = f.row(u).iter().sum();
            prop_assert_eq!(sum, k_i(k, i));
        }
    }

    #[test]
    fn certificate_matches_float_spectrum(g in pooled()) {
        let s = approx_spectrum_default(&g);
        let n = g.order() as f64;
        let tol = 1e-9;
        let sum: f64 = s.eigenvalues.iter().map(|(v, m)| v * *m as f64).sum();
        let sq: f64 = s.eigenvalues.iter().map(|(v, m)| v * v * *m as f64).sum();
        let a = g.adjacency();
        let tr2 = (&a * &a).trace().to_f64().unwrap();
        prop_assert!((sum - g.trace() as f64).abs() <= n * tol);
        prop_assert!((sq - tr2).abs() <= n * tol);

        if let Some(c) = certify_three_eigenvalues(&g).unwrap() {
            prop_assert_eq!(s.distinct(), 3);
            let want = c.eigenvalues();
            for ((got, gm), (w, wm)) in s.eigenvalues.iter().zip(want.iter()) {
                prop_assert!((got - w.to_f64()).abs() < 1e-6);
                prop_assert_eq!(*gm as u64, *wm);
            }
        } else {
            prop_assert_ne!(s.distinct(), 3);
        }
    }

    #[test]
    fn certified_graphs_respect_the_bounds(g in pooled()) {
        if let Some(c) = certify_three_eigenvalues(&g).unwrap() {
            prop_assert!(c.hoffman_identity_holds(&g));
            let n = c.n as u64;
            let q = c.k - 1;
            if !c.tau_sum().is_negative() {
                prop_assert!(n <= q * q + q + 1);
            }
            let bound = three_ev_bound(c.k).exact_value().unwrap().to_integer();
            prop_assert!(BigInt::from(n) <= bound);
            if n > q * q + q + 1 && c.k >= 3 {
                prop_assert!(g.is_simple());
                prop_assert_eq!(g.girth(), Girth::Finite(5));
                prop_assert_eq!(g.diameter(), Some(2));
            }
        }
    }

    #[test]
    fn simple_certificate_iff_srg(g in simple_pooled()) {
        let c = certify_three_eigenvalues(&g).unwrap();
        let p = srg_params(&g).unwrap();
        prop_assert_eq!(c.is_some(), p.is_some());
        if let (Some(c), Some(p)) = (c, p) {
            prop_assert_eq!(c.s.clone(), int(p.lambda as i64 - p.mu as i64));
            prop_assert_eq!(c.t.clone(), int(p.k as i64 - p.mu as i64));
            prop_assert!(srg_identity(p).holds());
        }
    }

    #[test]
    fn canonical_form_is_label_free(g in pooled(), seed in any::<u64>()) {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&g.permuted(&perm)), canonical_form(&g));
    }
}

#[test]
fn harmonic_matches_moore() {
    for k in 2u64..=20 {
        for d in 1u32..=5 {
            let f = FBasisExpansion::from_integers(k, &vec![1; d as usize + 1]).unwrap();
            let h = harmonic_bound(k, &f);
            assert_eq!(h.exact_value(), Some(&Rational::from_integer(moore_bound(k, d))), "k={k} d={d}");
        }
    }
}

#[test]
fn lp_bound_from_the_quadratic() {
    for q in 2i64..=20 {
        let k = q as u64 + 1;
        let f = expand_in_f_basis(&[int(-q), int(0), int(1)], k).unwrap();
        let r = Quadratic::sqrt(&int(q));
        let report = lp_bound_verify(k, &[r.clone(), -r], &f);
        assert!(report.holds(), "q={q}");
        assert_eq!(report.exact_value(), Some(&int(q * q + q + 1)));
    }
}

#[test]
fn polarity_graphs_for_small_prime_powers() {
    for q in (2u64..=13).filter(|&q| prime_power(q).is_some()) {
        let f = field_of_order(q).unwrap();
        let inc = plane_incidence(&f);
        assert!(verify_plane_axioms(&inc));
        let g = inc.to_multigraph();
        let n = (q * q + q + 1) as usize;
        assert_eq!(g.order(), n);
        for u in 0..n {
            assert!(g.row(u).iter().all(|&x| x <= 1));
            assert_eq!(g.degree(u), q + 1);
        }
        let absolute = (0..n)
            .filter(|&i| spectra_core::geometry::plane::dot(&f, &inc.points[i], &inc.points[i]).is_zero())
            .count() as u64;
        assert_eq!(absolute, q + 1);
        assert_eq!(g.trace(), q + 1);
        let a = g.adjacency();
        let rhs = &IntMatrix::identity(n).scale(&BigInt::from(q)) + &IntMatrix::ones(n);
        assert_eq!(&a * &a, rhs);
        assert_eq!(incidence_graph(&f), g.bipartite_double());
    }
}
