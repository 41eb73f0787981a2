//! Twisted traces on quantized type-A Kleinian singularities.
//!
//! Everything is exact over the Gaussian rationals except [`lerch`], which
//! checks analytic continuations numerically.

pub mod algebra;
pub mod catalog;
pub mod degeneracy;
pub mod error;
pub mod exact;
pub mod findim;
pub mod lerch;
pub mod pade;
pub mod parse;
pub mod selftest;
pub mod tracespace;

pub use error::{Error, Result};
pub use exact::{DensePolynomial, FactoredPolynomial, GaussianRational, Matrix, PrincipalParts};
