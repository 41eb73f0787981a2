//! Truncated series in `x^{-1}`: `Σ_{n≤N} c_n x^{-n-1}`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::DensePolynomial;
use super::scalar::GaussianRational;
use crate::error::{Error, Result};

/// An element of `x^{-1}ℂ[[x^{-1}]]` known through the coefficient of
/// `x^{-N-1}`. Coefficient `n` multiplies `x^{-n-1}`; for a trace these are
/// the moments `T(z^n)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedSeries {
    coeffs: Vec<GaussianRational>,
}

impl TruncatedSeries {
    /// Panics on an empty coefficient list; a series always carries `c_0`.
    pub fn new(coeffs: Vec<GaussianRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![GaussianRational::zero(); order + 1] }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Index `N` of the last known coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, n: usize) -> &GaussianRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient; the series then lies in
    /// `x^{-v-1}ℂ[[x^{-1}]]`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Polynomial part of `p(x) · F(x)`; needs `c_0..c_{deg p - 1}`.
    pub fn polynomial_part_of_product(&self, p: &DensePolynomial) -> Result<DensePolynomial> {
        let Some(d) = p.degree() else {
            return Ok(DensePolynomial::zero());
        };
        if d > 0 && d - 1 > self.order() {
            return Err(Error::InsufficientMoments { needed: d - 1, available: self.order() });
        }
        // coefficient of x^e for e >= 0 is Σ_i p_i c_{i-e-1}
        let out = (0..d)
            .map(|e| (e + 1..=d).map(|i| &p.coeff(i) * &self.coeffs[i - e - 1]).sum())
            .collect();
        Ok(DensePolynomial::new(out))
    }

    /// Negative-power part of `p(x) · F(x)`, known through `x^{-(N - deg p) - 1}`.
    pub fn mul_polynomial_tail(&self, p: &DensePolynomial) -> Result<Self> {
        let Some(d) = p.degree() else {
            return Ok(Self::zero(self.order()));
        };
        if d > self.order() {
            return Err(Error::InsufficientMoments { needed: d, available: self.order() });
        }
        // coefficient of x^{-k-1} is Σ_i p_i c_{k+i}
        let n = self.order() - d;
        Ok(Self {
            coeffs: (0..=n)
                .map(|k| (0..=d).map(|i| &p.coeff(i) * &self.coeffs[k + i]).sum())
                .collect(),
        })
    }
}

/// Expansion of `R/S` at infinity through the coefficient of `x^{-N-1}`.
pub fn series_of_rational(
    r: &DensePolynomial,
    s: &DensePolynomial,
    n: usize,
) -> Result<TruncatedSeries> {
    let Some(m) = s.degree() else {
        return Err(Error::DivisionByZero);
    };
    if r.degree().is_some_and(|dr| dr >= m) {
        return Err(Error::DegreeViolation(format!(
            "numerator degree {} must be below denominator degree {m}",
            r.degree().unwrap()
        )));
    }
    let lead_inv = s.leading().expect("nonzero").inv()?;
    let mut c: Vec<GaussianRational> = Vec::with_capacity(n + 1);
    // s_m c_k + Σ_{i<m} s_i c_{i-m+k} = r_{m-1-k}
    for k in 0..=n {
        let mut acc = if k < m { r.coeff(m - 1 - k) } else { GaussianRational::zero() };
        for i in m.saturating_sub(k)..m {
            let term = &s.coeff(i) * &c[i + k - m];
            acc -= &term;
        }
        c.push(&acc * &lead_inv);
    }
    Ok(TruncatedSeries::new(c))
}
