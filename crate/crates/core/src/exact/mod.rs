//! Exact scalar, polynomial, series and matrix arithmetic over ℚ(i).

mod coset;
mod matrix;
mod partial;
mod poly;
mod scalar;
mod series;

pub use coset::{coset_key, CosetKey};
pub use matrix::Matrix;
pub use partial::{partial_fractions, PrincipalParts};
pub use poly::{poly_shift, DensePolynomial, FactoredPolynomial};
pub use scalar::{binomial, floor, GaussianRational};
pub use series::{series_of_rational, TruncatedSeries};
