//! The classical projective plane PG(2, q), its orthogonal polarity, and
//! recognition of plane incidence graphs from bipartite doubles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::field::{FieldSpec, GFElement};
use crate::multigraph::{Girth, Multigraph};
use crate::spectral::certify_three_eigenvalues;

/// A 1-dimensional subspace of GF(q)^3, scaled so its first nonzero
/// coordinate is 1. Lines use the same representation: the line `a` is the
/// set of points `y` with `sum a_i y_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    pub coords: [GFElement; 3],
}

/// Symmetric point/line incidence under the orthogonal polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneIncidence {
    pub q: u64,
    pub points: Vec<ProjectivePoint>,
    pub incidence: Vec<Vec<u8>>,
}

/// Metadata emitted next to a constructed polarity graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometrySidecar {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
    pub absolute_points: Vec<usize>,
}

/// All `q^2 + q + 1` points: `(1, a, b)`, then `(0, 1, c)`, then `(0, 0, 1)`,
/// with field elements in their canonical index order.
pub fn pg2_points(field: &FieldSpec) -> Vec<ProjectivePoint> {
    let zero = field.zero();
    let one = field.one();
    let mut out = Vec::with_capacity((field.q * field.q + field.q + 1) as usize);
    for a in field.elements() {
        for b in field.elements() {
            out.push(ProjectivePoint {
                coords: [one.clone(), a.clone(), b],
            });
        }
    }
    for c in field.elements() {
        out.push(ProjectivePoint {
            coords: [zero.clone(), one.clone(), c],
        });
    }
    out.push(ProjectivePoint {
        coords: [zero.clone(), zero, one],
    });
    out
}

pub fn dot(field: &FieldSpec, x: &ProjectivePoint, y: &ProjectivePoint) -> GFElement {
    x.coords
        .iter()
        .zip(&y.coords)
        .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
}

pub fn plane_incidence(field: &FieldSpec) -> PlaneIncidence {
    let points = pg2_points(field);
    let incidence = points
        .iter()
        .map(|x| {
            points
                .iter()
                .map(|y| u8::from(dot(field, x, y).is_zero()))
                .collect()
        })
        .collect();
    PlaneIncidence {
        q: field.q,
        points,
        incidence,
    }
}

impl PlaneIncidence {
    pub fn to_multigraph(&self) -> Multigraph {
        let n = self.points.len();
        let adj = self
            .incidence
            .iter()
            .flat_map(|r| r.iter().map(|&x| u32::from(x)))
            .collect();
        Multigraph::from_flat_unchecked(n, adj)
    }

    /// Points lying on their own polar line.
    pub fn absolute_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.incidence[i][i] == 1)
            .collect()
    }
}

/// The polarity graph `G_q`: adjacency is the symmetric incidence matrix,
/// absolute points carry one loop.
pub fn polarity_graph(field: &FieldSpec) -> Multigraph {
    plane_incidence(field).to_multigraph()
}

/// The point-line incidence graph of PG(2, q), the bipartite double of `G_q`.
pub fn incidence_graph(field: &FieldSpec) -> Multigraph {
    polarity_graph(field).bipartite_double()
}

pub fn sidecar(field: &FieldSpec, inc: &PlaneIncidence) -> GeometrySidecar {
    GeometrySidecar {
        q: field.q,
        p: field.p,
        e: field.e,
        modulus: field.modulus.clone(),
        absolute_points: inc.absolute_points(),
    }
}

/// Whether a 0/1 matrix is the incidence matrix of a projective plane:
/// any two rows share exactly one column, any two columns share exactly one
/// row, and every row and column has at least three incidences.
pub fn verify_plane_axioms_matrix(m: &[Vec<u8>]) -> bool {
    let rows = m.len();
    if rows == 0 || m.iter().any(|r| r.len() != rows || r.iter().any(|&x| x > 1)) {
        return false;
    }
    let cols: Vec<Vec<u8>> = (0..rows).map(|j| m.iter().map(|r| r[j]).collect()).collect();
    let pairwise_unique = |vs: &[Vec<u8>]| {
        (0..vs.len()).all(|i| {
            (i + 1..vs.len()).all(|j| vs[i].iter().zip(&vs[j]).filter(|(a, b)| **a == 1 && **b == 1).count() == 1)
        })
    };
    let thick = |vs: &[Vec<u8>]| vs.iter().all(|v| v.iter().filter(|&&x| x == 1).count() >= 3);
    thick(m) && thick(&cols) && pairwise_unique(m) && pairwise_unique(&cols)
}

pub fn verify_plane_axioms(inc: &PlaneIncidence) -> bool {
    verify_plane_axioms_matrix(&inc.incidence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneRecognition {
    pub q: u64,
    pub double_order: usize,
    pub double_simple: bool,
    pub double_girth: String,
    pub plane_axioms: bool,
    pub recognized: bool,
    pub verdict: String,
}

/// Recovers a projective plane with polarity from a three-eigenvalue graph
/// of order `q^2 + q + 1` via its bipartite double.
pub fn recognize_plane_from_double(g: &Multigraph) -> Result<PlaneRecognition> {
    let cert = certify_three_eigenvalues(g)?.ok_or_else(|| {
        Error::PreconditionsNotMet("graph has no three-eigenvalue certificate".into())
    })?;
    let q = cert.k - 1;
    let n = g.order();
    let expected = (q * q + q + 1) as usize;
    if n != expected {
        return Err(Error::PreconditionsNotMet(format!(
            "order {n} differs from q^2 + q + 1 = {expected} for k = {}",
            cert.k
        )));
    }
    let double = g.bipartite_double();
    let double_simple = double.is_simple();
    let girth = double.girth();
    // The upper-right block of the double is the adjacency of g itself.
    let block: Vec<Vec<u8>> = (0..n)
        .map(|u| (0..n).map(|v| double.entry(u, n + v).min(2) as u8).collect())
        .collect();
    let plane_axioms = verify_plane_axioms_matrix(&block);
    let recognized = double_simple
        && double.order() == 2 * expected
        && girth == Girth::Finite(6)
        && plane_axioms;
    let verdict = if recognized {
        format!("incidence graph of a projective plane of order {q}, with polarity")
    } else {
        format!("not recognized as the incidence graph of a projective plane of order {q}")
    };
    Ok(PlaneRecognition {
        q,
        double_order: double.order(),
        double_simple,
        double_girth: girth.to_string(),
        plane_axioms,
        recognized,
        verdict,
    })
}
