//! Bounds and explicit codes for uniprior index coding problems.
//!
//! A uniprior problem is modelled as a [`model::DemandSupergraph`]. For the
//! class of generalized cycles the optimal broadcast length is sandwiched
//! between `n - τ_e` and `n - ν_e`, where ν_e and τ_e are the edge-disjoint
//! cycle packing number and the minimum feedback edge set size. The crate
//! computes both exactly, builds the cyclic code that meets the upper bound,
//! verifies codes by rank checks, and certifies when the two bounds coincide.

pub mod codes;
pub mod decompose;
pub mod error;
pub mod generate;
pub mod graphs;
pub mod minors;
pub mod model;
pub mod solvers;
pub mod transforms;

pub use error::{Error, Result};
