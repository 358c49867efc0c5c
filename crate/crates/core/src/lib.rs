//! Exact computations with finite categories, correspondences between them,
//! and the straightening of functors into unital lax functors valued in
//! correspondences.

pub mod enumerate;
pub mod envelope;
pub mod fincat;
pub mod fixtures;
pub mod profunctor;
pub mod generate;
pub mod morita;
pub mod simplex;
pub mod span;
pub mod straighten;
pub mod union_find;

pub use fincat::{FinCategory, Functor};
