//! Regular multigraphs with three distinct adjacency eigenvalues.
//!
//! Builds the polarity graphs of finite projective planes, certifies
//! three-eigenvalue spectra exactly, evaluates the Moore,
//! linear-programming and harmonic order bounds, and enumerates small
//! regular multigraphs exhaustively.

pub mod bounds;
pub mod error;
pub mod fbasis;
pub mod geometry;
pub mod matrix;
pub mod multigraph;
pub mod quadratic;
pub mod rational;
pub mod report;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use multigraph::{Builtin, DegreeProfile, Girth, Multigraph};
