//! The fixed sweep of defining polynomials and twists, plus seeded random
//! inputs over it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraElement;
use crate::exact::{DensePolynomial, FactoredPolynomial, GaussianRational};
use crate::parse::parse_factored;
use crate::tracespace::trace_dim;

pub const DEFAULT_SEED: u64 = 0x7ace;

const POLYNOMIALS: [&str; 9] = [
    "x",
    "x^2",
    "x*(x-1)",
    "x*(x-1/3)",
    "x*(x-1)*(x-2)",
    "x^2*(x-1)^2",
    "x*(x-1)*(x-5/2)",
    "(x+1/2)^2*(x-3/2)^2",
    "x*(x-2)",
];

const TWISTS: [&str; 5] = ["2", "1", "-1", "i", "1/3"];

pub fn polynomials() -> Vec<(&'static str, FactoredPolynomial)> {
    POLYNOMIALS.iter().map(|s| (*s, parse_factored(s).expect("catalog entry parses"))).collect()
}

pub fn twists() -> Vec<GaussianRational> {
    TWISTS.iter().map(|s| s.parse().expect("catalog twist parses")).collect()
}

/// Every `(label, P, t)` of the sweep, in a fixed order.
pub fn entries() -> Vec<(&'static str, FactoredPolynomial, GaussianRational)> {
    let ts = twists();
    polynomials()
        .into_iter()
        .flat_map(|(name, p)| ts.iter().map(move |t| (name, p.clone(), t.clone())))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Small Gaussian rational; a third of them have an imaginary part.
pub fn random_scalar(rng: &mut impl Rng) -> GaussianRational {
    let (a, b) = (rng.gen_range(-6..=6), rng.gen_range(1..=4));
    let (c, d) = if rng.gen_ratio(1, 3) { (rng.gen_range(-3..=3), rng.gen_range(1..=3)) } else { (0, 1) };
    GaussianRational::complex(a, b, c, d)
}

pub fn random_poly(rng: &mut impl Rng, max_deg: usize) -> DensePolynomial {
    let deg = rng.gen_range(0..=max_deg);
    DensePolynomial::new((0..=deg).map(|_| random_scalar(rng)).collect())
}

/// A random `Q` of the largest degree the trace space allows.
pub fn random_q(rng: &mut impl Rng, p: &FactoredPolynomial, t: &GaussianRational) -> DensePolynomial {
    let dim = trace_dim(p, t).expect("catalog entries are valid");
    DensePolynomial::new((0..dim).map(|_| random_scalar(rng)).collect())
}

/// A random element with grades in `-2..=2` and `z`-degree at most 2.
pub fn random_element(rng: &mut impl Rng, p: &FactoredPolynomial) -> AlgebraElement {
    let terms = rng.gen_range(1..=3);
    let comps = (0..terms).map(|_| (rng.gen_range(-2..=2i64), random_poly(rng, 2)));
    AlgebraElement::from_comps(p, comps)
}
