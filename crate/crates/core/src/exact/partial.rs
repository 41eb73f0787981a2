//! Principal-parts (partial-fraction) expansions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{DensePolynomial, FactoredPolynomial};
use super::scalar::{binomial, GaussianRational};
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

/// `Σ_a Σ_k e_a^{(k)} / (x - a)^k`, keyed by pole location. Each list holds
/// `[e^{(1)}, …, e^{(m)}]` with a nonzero top entry; locations with no
/// nonzero entry are absent.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrincipalParts {
    entries: BTreeMap<GaussianRational, Vec<GaussianRational>>,
}

impl PrincipalParts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from raw lists, trimming trailing zeros and dropping empty entries.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (GaussianRational, Vec<GaussianRational>)>,
    ) -> Self {
        let mut out = Self::new();
        for (a, list) in entries {
            for (k, c) in list.into_iter().enumerate() {
                out.add_term(&a, k as u32 + 1, &c);
            }
        }
        out
    }

    pub fn entries(&self) -> &BTreeMap<GaussianRational, Vec<GaussianRational>> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient of `1/(x - a)^k`.
    pub fn get(&self, a: &GaussianRational, k: u32) -> GaussianRational {
        self.entries
            .get(a)
            .and_then(|v| v.get(k as usize - 1))
            .cloned()
            .unwrap_or_default()
    }

    /// Pole order at `a` (zero when `a` is not a pole).
    pub fn order_at(&self, a: &GaussianRational) -> u32 {
        self.entries.get(a).map_or(0, |v| v.len() as u32)
    }

    pub fn max_order(&self) -> u32 {
        self.entries.values().map(|v| v.len() as u32).max().unwrap_or(0)
    }

    /// Adds `c/(x - a)^k` in place.
    pub fn add_term(&mut self, a: &GaussianRational, k: u32, c: &GaussianRational) {
        assert!(k >= 1, "pole orders start at 1");
        if c.is_zero() {
            return;
        }
        let list = self.entries.entry(a.clone()).or_default();
        let idx = k as usize - 1;
        if list.len() <= idx {
            list.resize(idx + 1, GaussianRational::zero());
        }
        list[idx] += c;
        while list.last().is_some_and(Zero::is_zero) {
            list.pop();
        }
        if list.is_empty() {
            self.entries.remove(a);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, list) in &other.entries {
            for (k, c) in list.iter().enumerate() {
                out.add_term(a, k as u32 + 1, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_entries(
            self.entries.iter().map(|(a, v)| (a.clone(), v.iter().map(|e| e * c).collect())),
        )
    }

    /// Keeps only the terms of order exactly `k`.
    pub fn order_component(&self, k: u32) -> Self {
        let mut out = Self::new();
        for a in self.entries.keys() {
            out.add_term(a, k, &self.get(a, k));
        }
        out
    }

    /// Iterates `(location, order, coefficient)` over the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&GaussianRational, u32, &GaussianRational)> {
        self.entries.iter().flat_map(|(a, v)| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(k, c)| (a, k as u32 + 1, c))
        })
    }

    /// The minimal denominator `Π (x - a)^{m_a}`.
    pub fn denominator(&self) -> FactoredPolynomial {
        FactoredPolynomial::new(self.entries.iter().map(|(a, v)| (a.clone(), v.len() as u32)))
    }

    /// Numerator over the given common denominator, which must be divisible
    /// by every `(x - a)^k` that occurs.
    pub fn numerator_over(&self, denominator: &FactoredPolynomial) -> Result<DensePolynomial> {
        let mut acc = DensePolynomial::zero();
        for (a, k, c) in self.terms() {
            acc = &acc + &denominator.cofactor(a, k)?.scale(c);
        }
        Ok(acc)
    }

    /// `(R, S)` with `S` the minimal monic denominator.
    pub fn to_rational(&self) -> (DensePolynomial, FactoredPolynomial) {
        let s = self.denominator();
        let r = self.numerator_over(&s).expect("denominator built from the parts");
        (r, s)
    }

    /// Expansion at infinity via `1/(x-a)^k = Σ_n binom(n, k-1) a^{n-k+1} x^{-n-1}`.
    pub fn series(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![GaussianRational::zero(); order + 1];
        for (a, k, c) in self.terms() {
            let k = k as usize;
            let mut a_pow = GaussianRational::one();
            for (n, slot) in coeffs.iter_mut().enumerate().skip(k - 1) {
                let term = &(&binomial(n as u64, k as u64 - 1) * &a_pow) * c;
                *slot += &term;
                a_pow = &a_pow * a;
            }
        }
        TruncatedSeries::new(coeffs)
    }

    /// Value at a point that is not a pole.
    pub fn eval(&self, x: &GaussianRational) -> Result<GaussianRational> {
        let mut acc = GaussianRational::zero();
        for (a, k, c) in self.terms() {
            let d = (x - a).pow(-(k as i64))?;
            acc += &(&d * c);
        }
        Ok(acc)
    }
}

/// Principal parts of `R/P` for `deg R < deg P`.
///
/// At a root `a` of multiplicity `p`, write `R/P = h(x) / (x - a)^p` with
/// `h = R / cofactor`; the coefficient of `1/(x - a)^k` is the Taylor
/// coefficient `h_{p-k}` of `h` at `a`.
pub fn partial_fractions(r: &DensePolynomial, p: &FactoredPolynomial) -> Result<PrincipalParts> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if r.degree().is_some_and(|dr| dr >= d) {
        return Err(Error::DegreeViolation(format!(
            "numerator degree {} must be below deg P = {d}",
            r.degree().unwrap()
        )));
    }
    let mut out = PrincipalParts::new();
    if r.is_zero() {
        return Ok(out);
    }
    for (a, mult) in p.roots() {
        let m = *mult as usize;
        let num = r.shift(a);
        let den = p.cofactor(a, *mult)?.shift(a);
        let taylor = power_series_div(&num, &den, m)?;
        for k in 1..=m {
            out.add_term(a, k as u32, &taylor[m - k]);
        }
    }
    Ok(out)
}

/// First `n` Taylor coefficients at 0 of `num/den`, `den(0) ≠ 0`.
fn power_series_div(
    num: &DensePolynomial,
    den: &DensePolynomial,
    n: usize,
) -> Result<Vec<GaussianRational>> {
    let d0_inv = den.coeff(0).inv()?;
    let mut h: Vec<GaussianRational> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = num.coeff(i);
        for j in 1..=i {
            let term = &den.coeff(j) * &h[i - j];
            acc -= &term;
        }
        h.push(&acc * &d0_inv);
    }
    Ok(h)
}
