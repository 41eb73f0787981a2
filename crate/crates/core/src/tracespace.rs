//! The space of `g_t`-twisted traces on `A_P`, parametrized by `Q` through
//! `P(x)(F(x + 1/2) - t F(x - 1/2)) = Q(x)` where `F = Σ T(z^n) x^{-n-1}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{divide_out, AlgebraElement};
use crate::error::{Error, Result};
use crate::exact::{
    binomial, series_of_rational, DensePolynomial, FactoredPolynomial, GaussianRational, Matrix,
    TruncatedSeries,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct TraceSpec {
    #[serde(rename = "P")]
    p: FactoredPolynomial,
    t: GaussianRational,
    #[serde(rename = "Q")]
    q: DensePolynomial,
}

#[derive(Deserialize)]
struct RawSpec {
    #[serde(rename = "P")]
    p: FactoredPolynomial,
    t: GaussianRational,
    #[serde(rename = "Q")]
    q: DensePolynomial,
}

impl TryFrom<RawSpec> for TraceSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        TraceSpec::new(raw.p, raw.t, raw.q)
    }
}

impl TraceSpec {
    pub fn new(p: FactoredPolynomial, t: GaussianRational, q: DensePolynomial) -> Result<Self> {
        let dim = trace_dim(&p, &t)?;
        if let Some(dq) = q.degree() {
            if dq + 1 > dim {
                return Err(Error::DegreeViolation(format!(
                    "deg Q = {dq} but the trace space for deg P = {} and t = {t} has dimension {dim}",
                    p.degree()
                )));
            }
        }
        Ok(Self { p, t, q })
    }

    pub fn zero(p: &FactoredPolynomial, t: &GaussianRational) -> Result<Self> {
        Self::new(p.clone(), t.clone(), DensePolynomial::zero())
    }

    pub fn p(&self) -> &FactoredPolynomial {
        &self.p
    }

    pub fn t(&self) -> &GaussianRational {
        &self.t
    }

    pub fn q(&self) -> &DensePolynomial {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.t != other.t {
            return Err(Error::AmbientMismatch);
        }
        Self::new(self.p.clone(), self.t.clone(), &self.q + &other.q)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { q: self.q.scale(c), ..self.clone() }
    }

    /// The same transform viewed on `A_big` for `P | big`: the pullback along
    /// `A_big → A_P`, with `Q` multiplied by `big / P`.
    pub fn lift_to(&self, big: &FactoredPolynomial) -> Result<Self> {
        if !self.p.divides(big) {
            return Err(Error::NotDivisible(format!("{} does not divide {big}", self.p)));
        }
        let cofactor = big.map_multiplicities(|a, m| m - self.p.multiplicity(a));
        Self::new(big.clone(), self.t.clone(), &self.q * cofactor.expand())
    }

    /// Inverse of [`TraceSpec::lift_to`]: descends to `A_small` when `Q` is
    /// divisible by `P / small`.
    pub fn descend_to(&self, small: &FactoredPolynomial) -> Result<Self> {
        let cofactor = self.p.map_multiplicities(|a, m| m.saturating_sub(small.multiplicity(a)));
        if divide_out(&self.p, cofactor.expand())? != *small {
            return Err(Error::NotDivisible(format!("{small} does not divide {}", self.p)));
        }
        let (quot, rem) = self.q.div_rem(cofactor.expand())?;
        if !rem.is_zero() {
            return Err(Error::NotDivisible(format!("Q is not divisible by {cofactor}")));
        }
        Self::new(small.clone(), self.t.clone(), quot)
    }
}

/// `deg P` for `t ≠ 1`, `deg P - 1` for `t = 1`.
pub fn trace_dim(p: &FactoredPolynomial, t: &GaussianRational) -> Result<usize> {
    if t.is_zero() {
        return Err(Error::ZeroTwist);
    }
    let d = p.degree();
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    Ok(if t.is_one() { d - 1 } else { d })
}

/// `a_{k,n}` with `F(x + 1/2) - t F(x - 1/2) = Σ_k x^{-k-1} Σ_{n≤k} a_{k,n} μ_n`.
fn difference_coefficient(t: &GaussianRational, k: usize, n: usize) -> GaussianRational {
    let e = (k - n) as i64;
    let half = GaussianRational::half();
    let minus = (-&half).pow(e).expect("nonzero base");
    let plus = half.pow(e).expect("nonzero base");
    &binomial(k as u64, n as u64) * &(&minus - &(t * &plus))
}

/// `μ_0 … μ_N`, solved from the triangular coefficient system.
pub fn solve_moments(spec: &TraceSpec, n: usize) -> Result<TruncatedSeries> {
    let t = &spec.t;
    let t_is_one = t.is_one();
    let g = series_of_rational(&spec.q, spec.p.expand(), n + 1)?;
    let table: Vec<Vec<GaussianRational>> = (0..=n + 1)
        .map(|k| (0..=k).map(|j| difference_coefficient(t, k, j)).collect())
        .collect();
    let mut mu: Vec<GaussianRational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // With t = 1 the diagonal vanishes; use the next row, pivot -(k+1).
        let row = if t_is_one { k + 1 } else { k };
        let mut acc = g.get(row).clone();
        for (j, m) in mu.iter().enumerate() {
            acc -= &(&table[row][j] * m);
        }
        let pivot = &table[row][k];
        mu.push(&acc / pivot);
    }
    Ok(TruncatedSeries::new(mu))
}

/// `T(a)`: the moment functional applied to the degree-zero component.
pub fn evaluate_trace(spec: &TraceSpec, a: &AlgebraElement) -> Result<GaussianRational> {
    if a.ambient() != &spec.p {
        return Err(Error::AmbientMismatch);
    }
    let q0 = a.component(0);
    let Some(deg) = q0.degree() else {
        return Ok(GaussianRational::zero());
    };
    let mu = solve_moments(spec, deg)?;
    Ok(q0.coeffs().iter().zip(mu.coeffs()).map(|(c, m)| c * m).sum())
}

/// `T(q(z))` for a polynomial `q`, given precomputed moments.
pub fn moment_functional(moments: &TruncatedSeries, q: &DensePolynomial) -> Result<GaussianRational> {
    let Some(deg) = q.degree() else {
        return Ok(GaussianRational::zero());
    };
    if deg > moments.order() {
        return Err(Error::InsufficientMoments { needed: deg, available: moments.order() });
    }
    Ok(q.coeffs().iter().zip(moments.coeffs()).map(|(c, m)| c * m).sum())
}

/// The `N×N` matrix `(μ_{i+j})`.
pub fn hankel_matrix(moments: &TruncatedSeries, n: usize) -> Result<Matrix> {
    if n > 0 && moments.order() + 2 < 2 * n {
        return Err(Error::InsufficientMoments { needed: 2 * n - 2, available: moments.order() });
    }
    Ok(Matrix::from_fn(n, n, |i, j| moments.get(i + j).clone()))
}

pub fn hankel_rank(moments: &TruncatedSeries, n: usize) -> Result<usize> {
    Ok(hankel_matrix(moments, n)?.rank())
}

/// Recovers `Q` from moments `μ_0 … μ_N` with `N ≥ deg P - 1`, and checks
/// the recovered trace reproduces every supplied moment.
pub fn trace_from_moments(
    p: &FactoredPolynomial,
    t: &GaussianRational,
    moments: &TruncatedSeries,
) -> Result<TraceSpec> {
    let d = p.degree();
    let order = moments.order();
    if order + 1 < d {
        return Err(Error::InsufficientMoments { needed: d - 1, available: order });
    }
    let g: Vec<GaussianRational> = (0..=order)
        .map(|k| (0..=k).map(|n| &difference_coefficient(t, k, n) * moments.get(n)).sum())
        .collect();
    let q = TruncatedSeries::new(g).polynomial_part_of_product(p.expand())?;
    let spec = TraceSpec::new(p.clone(), t.clone(), q)?;
    if solve_moments(&spec, order)? != *moments {
        return Err(Error::Falsified("moments do not come from a twisted trace on this algebra".into()));
    }
    Ok(spec)
}

/// The traces with `Q = x^0, …, x^{dim-1}`.
pub fn monomial_basis(p: &FactoredPolynomial, t: &GaussianRational) -> Result<Vec<TraceSpec>> {
    let dim = trace_dim(p, t)?;
    (0..dim)
        .map(|k| TraceSpec::new(p.clone(), t.clone(), DensePolynomial::monomial(GaussianRational::one(), k)))
        .collect()
}
