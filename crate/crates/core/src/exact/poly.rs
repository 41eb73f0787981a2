//! Dense and factored univariate polynomials over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::GaussianRational;
use crate::error::{Error, Result};

/// Coefficients in ascending degree with no trailing zeros; the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DensePolynomial {
    coeffs: Vec<GaussianRational>,
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `x - a`.
    pub fn linear(a: &GaussianRational) -> Self {
        Self::new(vec![-a, GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
            None => Self::zero(),
        }
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    /// `q(x) = p(x + h)`.
    pub fn shift(&self, h: &GaussianRational) -> Self {
        // Horner in the basis (x + h): acc <- acc * (x + h) + c.
        let mut acc: Vec<GaussianRational> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            acc.push(GaussianRational::zero());
            for k in (1..acc.len()).rev() {
                let t = &acc[k] * h;
                acc[k] = &acc[k - 1] + &t;
            }
            acc[0] = &(&acc[0] * h) + c;
        }
        Self::new(acc)
    }

    /// `q(x) = p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lc_inv = divisor.leading().expect("nonzero").inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let sub = &c * d;
                    rem[k + i] -= &sub;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; fails when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl Add for &DensePolynomial {
    type Output = DensePolynomial;
    fn add(self, rhs: &DensePolynomial) -> DensePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePolynomial::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &DensePolynomial {
    type Output = DensePolynomial;
    fn sub(self, rhs: &DensePolynomial) -> DensePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePolynomial::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &DensePolynomial {
    type Output = DensePolynomial;
    fn mul(self, rhs: &DensePolynomial) -> DensePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return DensePolynomial::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let p = a * b;
                out[i + j] += &p;
            }
        }
        DensePolynomial::new(out)
    }
}

impl Neg for &DensePolynomial {
    type Output = DensePolynomial;
    fn neg(self) -> DensePolynomial {
        DensePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_poly_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for DensePolynomial {
            type Output = DensePolynomial;
            fn $m(self, rhs: DensePolynomial) -> DensePolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_poly_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})x")?,
                _ => write!(f, "({c:?})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for DensePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Coeffs(Vec<GaussianRational>),
            Expr(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Coeffs(c) => Ok(Self::new(c)),
            Raw::Expr(s) => crate::parse::parse_polynomial(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// A monic polynomial given by its distinct roots and their multiplicities.
#[derive(Clone)]
pub struct FactoredPolynomial {
    roots: Vec<(GaussianRational, u32)>,
    expanded: DensePolynomial,
}

impl FactoredPolynomial {
    /// Repeated roots are merged; zero multiplicities are dropped.
    pub fn new(roots: impl IntoIterator<Item = (GaussianRational, u32)>) -> Self {
        let mut merged: std::collections::BTreeMap<GaussianRational, u32> = Default::default();
        for (r, m) in roots {
            if m > 0 {
                *merged.entry(r).or_default() += m;
            }
        }
        let roots: Vec<_> = merged.into_iter().collect();
        let expanded = roots
            .iter()
            .fold(DensePolynomial::one(), |acc, (r, m)| &acc * &DensePolynomial::linear(r).pow(*m));
        Self { roots, expanded }
    }

    pub fn one() -> Self {
        Self::new([])
    }

    /// Roots in increasing (real, imaginary) order.
    pub fn roots(&self) -> &[(GaussianRational, u32)] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn multiplicity(&self, a: &GaussianRational) -> u32 {
        self.roots.iter().find(|(r, _)| r == a).map_or(0, |(_, m)| *m)
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.roots.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }

    pub fn expand(&self) -> &DensePolynomial {
        &self.expanded
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.expanded.eval(x)
    }

    /// `P(x) / (x - a)^k` as a dense polynomial; `k` must not exceed the
    /// multiplicity of `a`.
    pub fn cofactor(&self, a: &GaussianRational, k: u32) -> Result<DensePolynomial> {
        let m = self.multiplicity(a);
        if k > m {
            return Err(Error::NotDivisible(format!("(x - {a:?})^{k} does not divide P")));
        }
        Ok(self
            .roots
            .iter()
            .map(|(r, mult)| if r == a { (r, mult - k) } else { (r, *mult) })
            .fold(DensePolynomial::one(), |acc, (r, m)| &acc * &DensePolynomial::linear(r).pow(m)))
    }

    /// Same polynomial with multiplicities mapped through `f` (zero drops the root).
    pub fn map_multiplicities(&self, f: impl Fn(&GaussianRational, u32) -> u32) -> Self {
        Self::new(self.roots.iter().map(|(r, m)| (r.clone(), f(r, *m))))
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.roots.iter().all(|(r, m)| other.multiplicity(r) >= *m)
    }
}

impl PartialEq for FactoredPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.roots == other.roots
    }
}

impl Eq for FactoredPolynomial {}

impl fmt::Debug for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders in the factored grammar accepted by [`crate::parse::parse_factored`].
impl fmt::Display for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .roots
            .iter()
            .map(|(r, m)| {
                let base = if r.is_zero() { "x".to_string() } else { format!("(x-({r}))") };
                if *m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Serialize, Deserialize)]
struct RootEntry {
    root: GaussianRational,
    mult: u32,
}

impl Serialize for FactoredPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<RootEntry> =
            self.roots.iter().map(|(r, m)| RootEntry { root: r.clone(), mult: *m }).collect();
        entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FactoredPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Roots(Vec<RootEntry>),
            Expr(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Roots(r) => Ok(Self::new(r.into_iter().map(|e| (e.root, e.mult)))),
            Raw::Expr(s) => crate::parse::parse_factored(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// `p(x + h)`.
pub fn poly_shift(p: &DensePolynomial, h: &GaussianRational) -> DensePolynomial {
    p.shift(h)
}
