//! Exact-arithmetic engine for the algebra of multiple zeta values.
//!
//! The crate builds the dual pairs of bases of the shuffle and quasi-shuffle
//! Hopf algebras on noncommutative polynomials, assembles the weight-truncated
//! grouplike generating series of zeta values, derives confluent rewriting
//! systems among the local-coordinate symbols by identification across the
//! bridge equation, and reduces any convergent multiple zeta value to a
//! canonical polynomial in the irreducible generators.  All algebra is over
//! arbitrary-precision rationals; a numeric module validates derived
//! relations against high-precision partial sums.

pub mod bases;
pub mod cache;
pub mod cli;
pub mod error;
pub mod identify;
pub mod ncpoly;
pub mod numcheck;
pub mod series;
pub mod symbols;
pub mod words;

pub use error::{Error, Result};
