//! Finite-dimensional modules and the traces `a ↦ tr(α ∘ a)` they carry.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::exact::{FactoredPolynomial, GaussianRational, Matrix, TruncatedSeries};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ModuleRep {
    pub dim: usize,
    #[serde(rename = "U")]
    pub u: Matrix,
    #[serde(rename = "V")]
    pub v: Matrix,
    #[serde(rename = "Z")]
    pub z: Matrix,
    pub alpha: Matrix,
}

impl ModuleRep {
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim + other.dim;
        let block = |a: &Matrix, b: &Matrix| {
            Matrix::from_fn(n, n, |i, j| match (i < self.dim, j < self.dim) {
                (true, true) => a[(i, j)].clone(),
                (false, false) => b[(i - self.dim, j - self.dim)].clone(),
                _ => GaussianRational::zero(),
            })
        };
        Self {
            dim: n,
            u: block(&self.u, &other.u),
            v: block(&self.v, &other.v),
            z: block(&self.z, &other.z),
            alpha: block(&self.alpha, &other.alpha),
        }
    }
}

/// The relations of `A_P` as matrix identities; returns the names of those that fail.
pub fn check_relations(m: &ModuleRep, p: &FactoredPolynomial) -> Vec<&'static str> {
    let half = GaussianRational::half();
    let id = Matrix::identity(m.dim);
    let z_minus = &m.z - &id.scale(&half);
    let z_plus = &m.z + &id.scale(&half);
    let mut failed = Vec::new();
    if &(&m.z * &m.u) - &(&m.u * &m.z) != m.u {
        failed.push("ZU - UZ = U");
    }
    if &(&m.z * &m.v) - &(&m.v * &m.z) != m.v.scale(&-GaussianRational::one()) {
        failed.push("ZV - VZ = -V");
    }
    if &m.u * &m.v != z_minus.eval_polynomial(p.expand()) {
        failed.push("UV = P(Z - 1/2)");
    }
    if &m.v * &m.u != z_plus.eval_polynomial(p.expand()) {
        failed.push("VU = P(Z + 1/2)");
    }
    failed
}

/// `A α = α g_t(A)` for the generators, with `g_t(U) = U/t`, `g_t(V) = tV`.
pub fn check_twisting(m: &ModuleRep, t: &GaussianRational) -> Result<bool> {
    let t_inv = t.inv()?;
    Ok(&m.u * &m.alpha == &m.alpha * &m.u.scale(&t_inv)
        && &m.v * &m.alpha == &m.alpha * &m.v.scale(t)
        && &m.z * &m.alpha == &m.alpha * &m.z)
}

fn require_root(p: &FactoredPolynomial, a: &GaussianRational, k: u32) -> Result<()> {
    let m = p.multiplicity(a);
    if m == 0 {
        return Err(Error::NotARoot(a.to_string()));
    }
    if m < k {
        return Err(Error::RootOrder(format!("{a} has multiplicity {m} in P, need at least {k}")));
    }
    Ok(())
}

/// `S_{a,a+j}`: basis `f_0 … f_{j-1}` with `z f_s = (a + s + 1/2) f_s`,
/// `u f_s = f_{s+1}`, `v f_s = P(a + s) f_{s-1}` and `α f_s = λ t^s f_s`.
pub fn build_string_module(
    p: &FactoredPolynomial,
    a: &GaussianRational,
    j: usize,
    lambda: &GaussianRational,
    t: &GaussianRational,
) -> Result<ModuleRep> {
    if j == 0 {
        return Err(Error::Invalid("string module needs j ≥ 1".into()));
    }
    require_root(p, a, 1)?;
    require_root(p, &(a + &GaussianRational::from(j as i64)), 1)?;
    let half = GaussianRational::half();
    let point = |s: usize| a + &GaussianRational::from(s as i64);
    let z = Matrix::diagonal(&(0..j).map(|s| &point(s) + &half).collect::<Vec<_>>());
    let u = Matrix::from_fn(j, j, |r, c| if r == c + 1 { GaussianRational::one() } else { GaussianRational::zero() });
    let v = Matrix::from_fn(j, j, |r, c| if c == r + 1 { p.eval(&point(c)) } else { GaussianRational::zero() });
    let alpha = Matrix::diagonal(
        &(0..j).map(|s| t.pow(s as i64).map(|ts| lambda * &ts)).collect::<Result<Vec<_>>>()?,
    );
    Ok(ModuleRep { dim: j, u, v, z, alpha })
}

/// The `n·k`-dimensional module with basis `e_j^{(p)} = u^j (z-a)^{p-1} e_0`
/// (`0 ≤ j < n`, `1 ≤ p ≤ k`), where `(z-a)^k e_0 = 0`. Its trace
/// `tr(α ∘ ·)` has transform `C Σ_j t^j / (x - a - j)^k`; `α` sends
/// `e_j^{(k)}` to `C t^j e_j^{(1)}` and kills the rest, so it is not a
/// twisting map when `k > 1`.
pub fn build_jordan_module(
    p: &FactoredPolynomial,
    a: &GaussianRational,
    n: usize,
    k: usize,
    c: &GaussianRational,
    t: &GaussianRational,
) -> Result<ModuleRep> {
    if n == 0 || k == 0 {
        return Err(Error::Invalid("Jordan module needs n ≥ 1 and k ≥ 1".into()));
    }
    let half = GaussianRational::half();
    require_root(p, &(a - &half), k as u32)?;
    require_root(p, &(&(a + &GaussianRational::from(n as i64)) - &half), k as u32)?;
    let dim = n * k;
    let idx = |j: usize, p: usize| j * k + (p - 1);
    let mut z = Matrix::zeros(dim, dim);
    let mut u = Matrix::zeros(dim, dim);
    let mut v = Matrix::zeros(dim, dim);
    let mut alpha = Matrix::zeros(dim, dim);
    for j in 0..n {
        let eigen = a + &GaussianRational::from(j as i64);
        // v u^j = u^{j-1} P(z + j - 1/2); expand P around z = a.
        let taylor = (j > 0).then(|| p.expand().shift(&(&eigen - &half)));
        for pp in 1..=k {
            let col = idx(j, pp);
            z[(col, col)] = eigen.clone();
            if pp < k {
                z[(idx(j, pp + 1), col)] = GaussianRational::one();
            }
            if j + 1 < n {
                u[(idx(j + 1, pp), col)] = GaussianRational::one();
            }
            if let Some(coeffs) = &taylor {
                for q in pp..=k {
                    v[(idx(j - 1, q), col)] = coeffs.coeff(q - pp);
                }
            }
        }
        alpha[(idx(j, 1), idx(j, k))] = c * &t.pow(j as i64)?;
    }
    Ok(ModuleRep { dim, u, v, z, alpha })
}

/// `μ_m = tr(α Z^m)` for `m ≤ N`.
pub fn module_trace(m: &ModuleRep, n: usize) -> TruncatedSeries {
    let mut power = m.alpha.clone();
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(power.trace());
        power = &power * &m.z;
    }
    TruncatedSeries::new(out)
}

/// The action of an algebra element: `u^k q(z) ↦ U^k q(Z)`, `v^k q(z) ↦ V^k q(Z)`.
pub fn represent(m: &ModuleRep, a: &AlgebraElement) -> Matrix {
    a.comps().iter().fold(Matrix::zeros(m.dim, m.dim), |acc, (k, q)| {
        let head = if *k >= 0 { m.u.pow(*k as u32) } else { m.v.pow(k.unsigned_abs() as u32) };
        &acc + &(&head * &m.z.eval_polynomial(q))
    })
}

/// `tr(α ∘ a)`.
pub fn module_trace_of(m: &ModuleRep, a: &AlgebraElement) -> GaussianRational {
    (&m.alpha * &represent(m, a)).trace()
}
