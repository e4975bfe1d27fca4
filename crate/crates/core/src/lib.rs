//! Generalised triangulations of closed 3-manifolds: layered constructions,
//! Z₂ double covers, edge crushing, quad normal surfaces, canonical
//! signatures and a small exhaustive census.
//!
//! All values are immutable after construction and every operation is a
//! pure function of its inputs, so everything here is safe to share across
//! threads.

pub mod algebra;
pub mod census;
pub mod constructions;
pub mod covers;
pub mod error;
pub mod homology;
pub mod isosig;
pub mod moves;
pub mod perm;
pub mod pipeline;
pub mod skeleton;
pub mod surface_complex;
pub mod surfaces;
pub mod tri;
mod uf;

/// Exact integer used throughout the homology computations.
pub type Int = num_bigint::BigInt;

pub use algebra::AbelianGroupSpec;
pub use error::{Error, Result};
pub use perm::Permutation4;
pub use tri::{Dart, Gluing, Triangulation};
