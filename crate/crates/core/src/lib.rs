//! Exact computations around affine Weyl groups with weighted alcove
//! geometry: totally ordered weight groups, lowest two-sided cells,
//! Kazhdan-Lusztig polynomials at unequal (and degenerate) parameters,
//! and parameter-space semicontinuity checks on length balls.
//!
//! Everything is carried out in exact rational / integer arithmetic.
//! With the `parallel` feature (on by default) the hot scans run on
//! rayon; without it the same code paths run sequentially.

pub mod error;
pub mod exec;
pub mod gamma;
pub mod geometry;
pub mod group;
pub mod lowest;
pub mod hecke;
pub mod claims;
pub mod params;
pub mod svg;

pub use error::Error;
pub use gamma::{GammaElement, LaurentElement, OrderedGroupSpec, WeightFunction};
pub use geometry::{GroupType, TypeGeometry};
pub use group::GroupElement;
