//! Degenerate traces: the Δ-criterion, δ(P), rational reconstruction of the
//! Stieltjes transform, decompositions and the Hankel–Vandermonde factorization.
//!
//! With `Q/P = Σ D_b^{(k)}/(x-b)^k` and `F = Σ C_a^{(k)}/(x-a)^k`, the
//! difference equation reads `D_b = C_{b+1/2} - t C_{b-1/2}` order by order,
//! so `C_a = Σ_{j≥0} t^j D_{a-1/2-j}` and `F` is rational exactly when every
//! coset sum `Δ_[b]^{(k)} = Σ_j t^{-j} D_{b+j}^{(k)}` vanishes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, coset_key, partial_fractions, CosetKey, DensePolynomial, FactoredPolynomial,
    GaussianRational, Matrix, PrincipalParts,
};
use crate::tracespace::{trace_dim, TraceSpec};

/// Roots of `P` grouped by coset, each with its multiplicity and its integer
/// offset from the coset representative, sorted by offset.
fn roots_by_coset(p: &FactoredPolynomial) -> BTreeMap<CosetKey, Vec<(GaussianRational, u32, i64)>> {
    let mut out: BTreeMap<CosetKey, Vec<_>> = BTreeMap::new();
    for (a, m) in p.roots() {
        let key = coset_key(a);
        let off = key.offset(a).expect("member of its own coset");
        out.entry(key).or_default().push((a.clone(), *m, off));
    }
    for roots in out.values_mut() {
        roots.sort_by_key(|r| r.2);
    }
    out
}

/// `δ(P) = Σ_[a] (Σ multiplicities − max multiplicity)` and the per-coset terms.
pub fn delta_invariant(p: &FactoredPolynomial) -> (usize, BTreeMap<CosetKey, usize>) {
    let per: BTreeMap<CosetKey, usize> = roots_by_coset(p)
        .into_iter()
        .map(|(k, roots)| {
            let total: u32 = roots.iter().map(|r| r.1).sum();
            let max = roots.iter().map(|r| r.1).max().unwrap_or(0);
            (k, (total - max) as usize)
        })
        .collect();
    (per.values().sum(), per)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PoleBounds {
    pub bounds: BTreeMap<GaussianRational, u32>,
    pub total: u32,
}

/// `n_a = min(n_a^-, n_a^+)` where `n_a^-` (`n_a^+`) is the largest
/// multiplicity of a root `≤ a - 1/2` (`≥ a + 1/2`) in the coset of `a - 1/2`.
pub fn pole_bounds(p: &FactoredPolynomial) -> PoleBounds {
    let half = GaussianRational::half();
    let mut bounds = BTreeMap::new();
    for (key, roots) in roots_by_coset(p) {
        let (lo, hi) = (roots.first().unwrap().2, roots.last().unwrap().2);
        for off in lo..hi {
            let below = roots.iter().filter(|r| r.2 <= off).map(|r| r.1).max().unwrap_or(0);
            let above = roots.iter().filter(|r| r.2 > off).map(|r| r.1).max().unwrap_or(0);
            let n = below.min(above);
            if n > 0 {
                let a = &(&key.representative() + &GaussianRational::from(off)) + &half;
                bounds.insert(a, n);
            }
        }
    }
    let total = bounds.values().sum();
    PoleBounds { bounds, total }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaValue {
    pub coset: CosetKey,
    pub order: u32,
    pub value: GaussianRational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegeneracyReport {
    pub degenerate: bool,
    #[serde(serialize_with = "delta_table")]
    pub deltas: Vec<DeltaValue>,
    #[serde(serialize_with = "coset_table")]
    pub per_coset_delta: BTreeMap<CosetKey, usize>,
    pub delta_total: usize,
}

fn delta_table<S: Serializer>(deltas: &[DeltaValue], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(deltas.len()))?;
    for d in deltas {
        map.serialize_entry(&format!("{}:{}", d.coset, d.order), &d.value)?;
    }
    map.end()
}

fn coset_table<S: Serializer>(
    per: &BTreeMap<CosetKey, usize>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(per.len()))?;
    for (k, v) in per {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

/// `Δ_[b]^{(k)} = Σ_j t^{-j} D_{b+j}^{(k)}` relative to the representative `b`,
/// for every coset of roots and every order up to the coset's top multiplicity.
fn delta_values(
    p: &FactoredPolynomial,
    t: &GaussianRational,
    parts: &PrincipalParts,
) -> Result<Vec<DeltaValue>> {
    let mut out = Vec::new();
    for (coset, roots) in roots_by_coset(p) {
        let top = roots.iter().map(|r| r.1).max().unwrap_or(0);
        for k in 1..=top {
            let mut value = GaussianRational::zero();
            for (b, _, off) in &roots {
                let d = parts.get(b, k);
                if !d.is_zero() {
                    value += &(&t.pow(-off)? * &d);
                }
            }
            out.push(DeltaValue { coset: coset.clone(), order: k, value });
        }
    }
    Ok(out)
}

pub fn delta_criterion(spec: &TraceSpec) -> Result<DegeneracyReport> {
    let parts = partial_fractions(spec.q(), spec.p())?;
    let deltas = delta_values(spec.p(), spec.t(), &parts)?;
    let (delta_total, per_coset_delta) = delta_invariant(spec.p());
    Ok(DegeneracyReport {
        degenerate: deltas.iter().all(|d| d.value.is_zero()),
        deltas,
        per_coset_delta,
        delta_total,
    })
}

pub fn is_degenerate(spec: &TraceSpec) -> Result<bool> {
    Ok(delta_criterion(spec)?.degenerate)
}

/// The partial-fraction coordinates `(b, k)` of `Q/P`, in root order.
fn d_coordinates(p: &FactoredPolynomial) -> Vec<(GaussianRational, u32)> {
    p.roots().iter().flat_map(|(a, m)| (1..=*m).map(move |k| (a.clone(), k))).collect()
}

/// A basis of the degenerate subspace, solved in partial-fraction
/// coordinates and mapped back to `Q`. Each vector is scaled so its first
/// nonzero coordinate is 1.
pub fn degenerate_basis(p: &FactoredPolynomial, t: &GaussianRational) -> Result<Vec<TraceSpec>> {
    trace_dim(p, t)?;
    let coords = d_coordinates(p);
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for (_, roots) in roots_by_coset(p) {
        let top = roots.iter().map(|r| r.1).max().unwrap_or(0);
        for k in 1..=top {
            let row = coords
                .iter()
                .map(|(b, kk)| match roots.iter().find(|r| &r.0 == b) {
                    Some((_, _, off)) if *kk == k => t.pow(-off),
                    _ => Ok(GaussianRational::zero()),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
    }
    if t.is_one() {
        // deg Q ≤ d - 2: the residues sum to zero.
        rows.push(
            coords
                .iter()
                .map(|(_, k)| if *k == 1 { GaussianRational::one() } else { GaussianRational::zero() })
                .collect(),
        );
    }
    let kernel = Matrix::from_rows(rows)?.nullspace();
    kernel
        .into_iter()
        .map(|v| {
            let lead = v.iter().find(|c| !c.is_zero()).expect("kernel vectors are nonzero").inv()?;
            let parts = PrincipalParts::from_entries(
                coords.iter().zip(&v).map(|((b, k), c)| {
                    let mut list = vec![GaussianRational::zero(); *k as usize];
                    list[*k as usize - 1] = c * &lead;
                    (b.clone(), list)
                }),
            );
            TraceSpec::new(p.clone(), t.clone(), parts.numerator_over(p)?)
        })
        .collect()
}

/// `R/S` in lowest terms together with its principal parts `C_a^{(k)}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RationalFunction {
    #[serde(rename = "R")]
    pub numer: DensePolynomial,
    #[serde(rename = "S")]
    pub denom: FactoredPolynomial,
    #[serde(rename = "C")]
    pub parts: PrincipalParts,
}

impl RationalFunction {
    pub fn from_parts(parts: PrincipalParts) -> Self {
        let (numer, denom) = parts.to_rational();
        Self { numer, denom, parts }
    }
}

/// `F_T` of a degenerate trace. `S` is the monic generator of the radical.
pub fn reconstruct_rational(spec: &TraceSpec) -> Result<RationalFunction> {
    let d = partial_fractions(spec.q(), spec.p())?;
    if !delta_values(spec.p(), spec.t(), &d)?.iter().all(|v| v.value.is_zero()) {
        return Err(Error::NotDegenerate);
    }
    let t = spec.t();
    let half = GaussianRational::half();
    let mut c = PrincipalParts::new();
    for (key, roots) in roots_by_coset(spec.p()) {
        let top = roots.iter().map(|r| r.1).max().unwrap_or(0);
        let (lo, hi) = (roots.first().unwrap().2, roots.last().unwrap().2);
        for k in 1..=top {
            // C_{b+1/2} = D_b + t C_{b-1/2}, walking up the coset.
            let mut carry = GaussianRational::zero();
            for off in lo..=hi {
                let b = &key.representative() + &GaussianRational::from(off);
                carry = &d.get(&b, k) + &(t * &carry);
                c.add_term(&(&b + &half), k, &carry);
            }
        }
    }
    Ok(RationalFunction::from_parts(c))
}

/// Splits `T` by pole order: component `k` lives on
/// `P^{(k)} = Π (x - a)^{min(p_a, k)}` and keeps only the order-`k` parts of `Q/P`.
pub fn decompose_pole_order(spec: &TraceSpec) -> Result<Vec<(u32, TraceSpec)>> {
    let d = partial_fractions(spec.q(), spec.p())?;
    let mut out = Vec::new();
    for k in 1..=d.max_order() {
        let dk = d.order_component(k);
        if dk.is_zero() {
            continue;
        }
        let pk = spec.p().map_multiplicities(|_, m| m.min(k));
        let qk = dk.numerator_over(&pk)?;
        out.push((k, TraceSpec::new(pk, spec.t().clone(), qk)?));
    }
    Ok(out)
}

/// Writes a degenerate `T` as a sum of traces pulled back from algebras whose
/// polynomial `(x - b)^k (x - b - j)^k` has two roots at integer distance.
pub fn decompose_two_root(spec: &TraceSpec) -> Result<Vec<(FactoredPolynomial, TraceSpec)>> {
    let d = partial_fractions(spec.q(), spec.p())?;
    if !delta_values(spec.p(), spec.t(), &d)?.iter().all(|v| v.value.is_zero()) {
        return Err(Error::NotDegenerate);
    }
    let t = spec.t();
    let mut out = Vec::new();
    for k in 1..=d.max_order() {
        for roots in roots_by_coset(spec.p()).values() {
            let chain: Vec<_> = roots.iter().filter(|r| r.1 >= k).collect();
            let mut carry = GaussianRational::zero();
            for pair in chain.windows(2) {
                let (b0, b1) = (&pair[0].0, &pair[1].0);
                let coeff = &d.get(b0, k) + &carry;
                let tj = t.pow(pair[1].2 - pair[0].2)?;
                carry = &tj * &coeff;
                if coeff.is_zero() {
                    continue;
                }
                let p2 = FactoredPolynomial::new([(b0.clone(), k), (b1.clone(), k)]);
                let mut g = PrincipalParts::new();
                g.add_term(b0, k, &coeff);
                g.add_term(b1, k, &-&carry);
                let q2 = g.numerator_over(&p2)?;
                out.push((p2.clone(), TraceSpec::new(p2, t.clone(), q2)?));
            }
            if let Some(last) = chain.last() {
                let rest = &d.get(&last.0, k) + &carry;
                if !rest.is_zero() {
                    return Err(Error::Falsified(format!(
                        "two-root peel-off left {rest} at {:?} (order {k})",
                        last.0
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Per-pole blocks of `H = Σ_a (V^{(a)})^T D^{(a)} V^{(a)}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VandermondeBlock {
    pub pole: GaussianRational,
    #[serde(rename = "V")]
    pub v: Matrix,
    #[serde(rename = "D")]
    pub d: Matrix,
}

/// `V_{ij} = binom(j-1, i-1) a^{j-i}` (`m_a × N`), `D_{ij} = C_a^{(i+j-1)}` (`m_a × m_a`).
pub fn vandermonde_factor(f: &RationalFunction, n: usize) -> Vec<VandermondeBlock> {
    f.parts
        .entries()
        .iter()
        .map(|(a, cs)| {
            let m = cs.len();
            let v = Matrix::from_fn(m, n, |i, j| {
                if j < i {
                    GaussianRational::zero()
                } else {
                    &binomial(j as u64, i as u64) * &a.pow((j - i) as i64).expect("nonnegative power")
                }
            });
            let d = Matrix::from_fn(m, m, |i, j| cs.get(i + j).cloned().unwrap_or_default());
            VandermondeBlock { pole: a.clone(), v, d }
        })
        .collect()
}

/// `Σ_a V^T D V`, the `N × N` Hankel matrix of the moments.
pub fn assemble_hankel(blocks: &[VandermondeBlock], n: usize) -> Matrix {
    blocks.iter().fold(Matrix::zeros(n, n), |acc, b| &acc + &(&(&b.v.transpose() * &b.d) * &b.v))
}
