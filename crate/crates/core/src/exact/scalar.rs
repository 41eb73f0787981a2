//! Exact Gaussian rationals `p/q + (r/s)i`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An element of the field ℚ(i).
///
/// Both parts are kept in lowest terms with a positive denominator, which
/// `BigRational` guarantees. The derived ordering is lexicographic on
/// (real, imaginary) and is used wherever a deterministic order of
/// locations is needed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `num/den` as a real scalar. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn half() -> Self {
        Self::ratio(1, 2)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, Error> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { re: &self.re / &n, im: -&self.im / &n })
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Result<Self, Error> {
        if exp < 0 {
            return self.inv()?.pow(-exp);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Returns `Some(n)` if the value is the integer `n`.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Natural log of the modulus, robust against values far outside the
    /// `f64` range.
    pub fn ln_abs(&self) -> f64 {
        let a = ln_abs_rational(&self.re);
        let b = ln_abs_rational(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp()).ln()
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let l = ln_abs_rational(r);
        let v = l.exp();
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().map(f64::abs).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_abs_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Panics on division by zero, like the primitive numeric types. Use
/// [`GaussianRational::inv`] for a checked inverse.
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero");
            return GaussianRational { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                self.$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

/// Canonical wire format: `p/q+r/si`, e.g. `-3/2+0/1i` or `1/2-1/3i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}/{}{}{}/{}i",
            self.re.numer(),
            self.re.denom(),
            sign,
            self.im.numer().abs(),
            self.im.denom()
        )
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.re)?;
        if !self.im.is_zero() {
            if self.im.is_negative() {
                write!(f, "{}i", self.im)?;
            } else {
                write!(f, "+{}i", self.im)?;
            }
        }
        Ok(())
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid scalar {whole:?}"));
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {whole:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Accepts the canonical form as well as the shorthands `2`, `-1/3`, `i`,
/// `-2i`, `1/2+i`, `3-1/4i`.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&s, input)?));
        };
        // The split point is the last sign that follows a digit.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && bytes[k - 1].is_ascii_digit());
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let sign_len = im_part.len() - im_part.trim_start_matches(['+', '-']).len();
        let negative = im_part[..sign_len].matches('-').count() % 2 == 1;
        let magnitude = match &im_part[sign_len..] {
            "" => BigRational::one(),
            m => parse_rational(m, input)?,
        };
        let im = if negative { -magnitude } else { magnitude };
        Ok(Self { re: parse_rational(re_part, input)?, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Self::from_int(n)),
        }
    }
}

/// `n choose k` as an exact scalar; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> GaussianRational {
    if k > n {
        return GaussianRational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    GaussianRational::real(BigRational::from_integer(acc))
}

/// Floor of a rational, as an integer.
pub fn floor(r: &BigRational) -> BigInt {
    let (q, _) = r.numer().div_mod_floor(r.denom());
    q
}
