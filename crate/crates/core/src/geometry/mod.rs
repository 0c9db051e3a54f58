//! Finite fields and the classical projective plane over them.

pub mod field;
pub mod plane;

pub use field::{field_make, field_of_order, prime_power, FieldSpec, GFElement};
pub use plane::{
    incidence_graph, pg2_points, plane_incidence, polarity_graph, recognize_plane_from_double,
    verify_plane_axioms, GeometrySidecar, PlaneIncidence, PlaneRecognition, ProjectivePoint,
};
