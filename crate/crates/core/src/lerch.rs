//! Floating-point Lerch transcendent `Φ(t, n, x) = Σ_{j≥0} t^j / (x + j)^n`
//! and a numeric check that
//! `F̃(x) = Σ_a Σ_ℓ (-1)^ℓ D_a^{(ℓ)} Φ(t, ℓ, a - x + 1/2)` solves
//! `F̃(x + 1/2) - t F̃(x - 1/2) = Q(x)/P(x)` for `|t| ≤ 1`, `t ≠ 1`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{partial_fractions, GaussianRational};
use crate::tracespace::{solve_moments, TraceSpec};

pub type ComplexFloat = Complex64;

const REL_TOL: f64 = 1e-14;
const MAX_TERMS: usize = 1_000_000;
const POLE_TOL: f64 = 1e-9;

/// Series summation; the terms with `Re(x + j) ≤ 0` are the finitely many
/// applications of `Φ(x) = x^{-n} + t Φ(x + 1)` that move the argument into
/// the half-plane where the tail majorants apply.
pub fn lerch_phi(t: ComplexFloat, n: u32, x: ComplexFloat) -> Result<ComplexFloat> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let r = t.norm();
    if !r.is_finite() || r > 1.0 + 1e-15 {
        return Err(Error::Domain(format!("|t| = {r} exceeds 1")));
    }
    let on_circle = (r - 1.0).abs() <= 1e-15;
    if on_circle && n == 1 {
        return Err(Error::Domain("|t| = 1 with n = 1 diverges".into()));
    }
    if x.re <= 0.5 && (x.re - x.re.round()).abs() < POLE_TOL && x.im.abs() < POLE_TOL {
        return Err(Error::PoleProximity(format!("x = {x} is near a nonpositive integer")));
    }
    let ni = n as i32;
    let mut sum = Complex64::zero();
    let mut tj = Complex64::one();
    let mut r_pow = 1.0;
    for j in 0..MAX_TERMS {
        let y = x + j as f64;
        sum += tj * y.powi(-ni);
        tj *= t;
        r_pow *= r;
        let next = x.re + (j + 1) as f64;
        if next <= 0.0 || (on_circle && next <= 1.0) {
            continue;
        }
        let tail = if on_circle {
            // Σ_{i>j} (Re x + i)^{-n} ≤ ∫_{j}^∞ (Re x + s)^{-n} ds
            (next - 1.0).powi(1 - ni) / (ni - 1) as f64
        } else {
            r_pow * next.powi(-ni) / (1.0 - r)
        };
        if tail <= REL_TOL * sum.norm() || tail == 0.0 {
            return Ok(sum);
        }
        if j + 1 == MAX_TERMS {
            return Err(Error::NotConverged { terms: MAX_TERMS, tail_bound: tail });
        }
    }
    Err(Error::NotConverged { terms: MAX_TERMS, tail_bound: f64::INFINITY })
}

/// `F̃(x)` assembled from the partial fractions of `Q/P`.
pub fn lerch_transform(spec: &TraceSpec, x: ComplexFloat) -> Result<ComplexFloat> {
    let t = spec.t().to_complex64();
    let parts = partial_fractions(spec.q(), spec.p())?;
    let half = Complex64::new(0.5, 0.0);
    let mut acc = Complex64::zero();
    for (a, l, d) in parts.terms() {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        acc += d.to_complex64() * sign * lerch_phi(t, l, a.to_complex64() - x + half)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleResidual {
    pub x: [f64; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualReport {
    pub max_residual: f64,
    pub samples: Vec<SampleResidual>,
}

/// `max |F̃(x + 1/2) - t F̃(x - 1/2) - Q(x)/P(x)|` over the samples.
pub fn verify_lerch_recursion(spec: &TraceSpec, samples: &[ComplexFloat]) -> Result<ResidualReport> {
    if spec.t().is_one() {
        return Err(Error::Domain("t = 1 is not covered by the series construction".into()));
    }
    let t = spec.t().to_complex64();
    let roots: Vec<Complex64> = spec.p().roots().iter().map(|(a, _)| a.to_complex64()).collect();
    let half = Complex64::new(0.5, 0.0);
    let mut out = Vec::with_capacity(samples.len());
    for &x in samples {
        for a in &roots {
            let d = x - a;
            if (d.re - d.re.round()).abs() < 1e-6 && d.im.abs() < 1e-6 {
                return Err(Error::PoleProximity(format!("sample {x} lies on the pole lattice of {a}")));
            }
        }
        let lhs = lerch_transform(spec, x + half)? - t * lerch_transform(spec, x - half)?;
        let rhs = eval_poly(spec.q().coeffs(), x) / eval_poly(spec.p().expand().coeffs(), x);
        out.push(SampleResidual { x: [x.re, x.im], residual: (lhs - rhs).norm() });
    }
    let max_residual = out.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(ResidualReport { max_residual, samples: out })
}

fn eval_poly(coeffs: &[GaussianRational], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * x + c.to_complex64())
}

/// `|μ_n|^{1/n} / n` for each `n` in the range, from exact moments. For a
/// nondegenerate trace this stays bounded away from zero: the moment series
/// has radius of convergence zero.
pub fn moment_growth(spec: &TraceSpec, range: std::ops::RangeInclusive<usize>) -> Result<Vec<(usize, f64)>> {
    let mu = solve_moments(spec, *range.end())?;
    Ok(range
        .filter(|&n| n > 0)
        .map(|n| (n, (mu.get(n).ln_abs() / n as f64).exp() / n as f64))
        .collect())
}
