//! Linear and affine coverings of finite-dimensional vector spaces over
//! finite fields.
//!
//! Over `F_q`, every covering of `F_q^d` (`d >= 2`) by proper linear
//! subspaces has at least `q + 1` members, and the `q + 1` lines through the
//! origin of a plane, pulled back along a coordinate projection, achieve
//! this. Coverings by proper affine subspaces need `q` members. The crate
//! verifies coverings, builds the extremal ones, extracts the line witness
//! behind the lower bound, and recomputes all four covering numbers by
//! exhaustive search.

pub mod cli;
pub mod cover;
pub mod field;
pub mod linalg;
pub mod solver;
pub mod subspace;

pub use cover::{CoverFamily, CoverKind};
pub use field::{make_field, Elem, FieldSpec};
pub use linalg::{Matrix, Vector};
pub use solver::CoverResult;
pub use subspace::{AffineSubspace, LinearSubspace, ProjectivePoint};
