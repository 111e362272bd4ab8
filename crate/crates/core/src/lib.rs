//! Instanton calculus for the symmetric triple-well potential
//! `V(φ) = αφ²(φ − β)²(φ + β)²`, together with an exact-diagonalisation
//! oracle for the lowest energy block.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dilute_gas;
pub mod error;
pub mod fluctuation;
pub mod instanton;
pub mod potential;
pub mod quadrature;
pub mod spectrum;
pub mod tridiagonal;

pub use error::{Error, ErrorClass, Result};
pub use potential::{PotentialParams, WellGeometry};
pub use spectrum::GridSpec;
