//! Exact rational tools for majorization relative to a positive weight vector.
//!
//! For `d` with strictly positive entries, `x ≺_d y` holds when a
//! column-stochastic matrix fixing `d` maps `y` to `x`. The crate decides the
//! relation, builds the polytope `M_d(y)` of everything below `y` in both
//! halfspace and vertex form, and provides the supporting exact linear
//! programming.

pub mod arith;
pub mod classical;
pub mod curve;
pub mod dmaj;
pub mod error;
pub mod halfspace;
pub mod lp;
pub mod polytope;
pub mod sd3;

pub use arith::{Permutation, RMatrix, RVec, Rational};
pub use dmaj::{StochMatrix, WeightVec};
pub use error::{Error, Result};
pub use halfspace::{HalfspaceSystem, RowMask, VPolytope};
