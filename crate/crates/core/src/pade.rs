//! `[n-1/n]` Padé approximants of the Stieltjes transform at infinity and
//! the n-degeneracy profile they detect.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{DensePolynomial, GaussianRational, Matrix, TruncatedSeries};
use crate::tracespace::{hankel_rank, solve_moments, TraceSpec};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PadeApproximant {
    pub n: usize,
    #[serde(rename = "S")]
    pub s: DensePolynomial,
    #[serde(rename = "R")]
    pub r: DensePolynomial,
}

impl PadeApproximant {
    pub fn deg_s(&self) -> usize {
        self.s.degree().expect("S is monic")
    }
}

/// `S_n`: the monic polynomial of least degree `m ≤ n` with
/// `T(S(z) z^k) = 0` for `k < n`, and `R` the polynomial part of `S·F`.
///
/// At the least degree the linear system has a unique solution: the
/// difference of two solutions would be a lower-degree orthogonal polynomial.
pub fn pade_approximant(moments: &TruncatedSeries, n: usize) -> Result<PadeApproximant> {
    if n > 0 && moments.order() + 1 < 2 * n {
        return Err(Error::InsufficientMoments { needed: 2 * n - 1, available: moments.order() });
    }
    for m in 0..=n {
        let a = Matrix::from_fn(n, m, |k, i| moments.get(i + k).clone());
        let b: Vec<GaussianRational> = (0..n).map(|k| -moments.get(m + k)).collect();
        if let Some(mut coeffs) = a.solve(&b) {
            coeffs.push(GaussianRational::one());
            let s = DensePolynomial::new(coeffs);
            let r = moments.polynomial_part_of_product(&s)?;
            return Ok(PadeApproximant { n, s, r });
        }
    }
    unreachable!("an n × (n+1) homogeneous system has a nonzero solution")
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileEntry {
    pub n: usize,
    pub deg_s: usize,
    pub n_degenerate: bool,
}

/// For `n = 0..=n_max`: `deg S_n` and whether `T` is n-degenerate, decided by
/// `deg S_{n+1} ≤ n` and cross-checked against singularity of the
/// `(n+1)×(n+1)` Hankel block.
pub fn degeneracy_profile(spec: &TraceSpec, n_max: usize) -> Result<Vec<ProfileEntry>> {
    let moments = solve_moments(spec, 2 * n_max + 1)?;
    profile_from_moments(&moments, n_max)
}

pub fn profile_from_moments(moments: &TruncatedSeries, n_max: usize) -> Result<Vec<ProfileEntry>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut current = pade_approximant(moments, 0)?;
    for n in 0..=n_max {
        let next = pade_approximant(moments, n + 1)?;
        let by_pade = next.deg_s() <= n;
        let by_hankel = hankel_rank(moments, n + 1)? <= n;
        if by_pade != by_hankel {
            return Err(Error::Falsified(format!(
                "n = {n}: Padé says {by_pade}, Hankel rank says {by_hankel}"
            )));
        }
        out.push(ProfileEntry { n, deg_s: current.deg_s(), n_degenerate: by_pade });
        current = next;
    }
    Ok(out)
}

/// Exact residual `R(x+½)/S(x+½) − t R(x−½)/S(x−½) − Q/P` of the `n`-th approximant.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PadeResidual {
    pub n: usize,
    pub deg_s: usize,
    /// Vanishing order at infinity; `None` when the residual is identically zero.
    pub order: Option<usize>,
    /// `2n+1` (`2n+2` at `t = 1`) for a normal entry `deg S_n = n`; with
    /// `deg S_n = m < n` only `n+m+1` (`n+m+2`) is guaranteed.
    pub bound: usize,
    #[serde(skip)]
    pub numerator: DensePolynomial,
    #[serde(skip)]
    pub denominator: DensePolynomial,
}

impl PadeResidual {
    pub fn meets_bound(&self) -> bool {
        self.order.is_none_or(|o| o >= self.bound)
    }
}

pub fn verify_pade_functional(spec: &TraceSpec, n: usize) -> Result<PadeResidual> {
    let moments = solve_moments(spec, 2 * n.max(1) - 1)?;
    let approx = pade_approximant(&moments, n)?;
    let half = GaussianRational::half();
    let minus_half = -&half;
    let p = spec.p().expand();
    let (s_plus, s_minus) = (approx.s.shift(&half), approx.s.shift(&minus_half));
    let (r_plus, r_minus) = (approx.r.shift(&half), approx.r.shift(&minus_half));
    let numerator = &(&(&(&r_plus * &s_minus) * p) - &(&(&r_minus * &s_plus) * p).scale(spec.t()))
        - &(&(spec.q() * &s_plus) * &s_minus);
    let denominator = &(&s_plus * &s_minus) * p;
    let order = numerator.degree().map(|dn| denominator.degree().unwrap() - dn);
    let m = approx.deg_s();
    let extra = usize::from(spec.t().is_one());
    Ok(PadeResidual { n, deg_s: m, order, bound: n + m + 1 + extra, numerator, denominator })
}

/// Orthogonality `T(S_n(z) z^k) = 0` for `k < n`.
pub fn orthogonality_defects(moments: &TruncatedSeries, approx: &PadeApproximant) -> Vec<GaussianRational> {
    (0..approx.n)
        .map(|k| approx.s.coeffs().iter().enumerate().map(|(i, c)| c * moments.get(i + k)).sum())
        .filter(|v: &GaussianRational| !v.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{series_of_rational, FactoredPolynomial};

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn fp(roots: &[(&str, u32)]) -> FactoredPolynomial {
        FactoredPolynomial::new(roots.iter().map(|(r, m)| (q(r), *m)))
    }

    fn poly(c: &[&str]) -> DensePolynomial {
        DensePolynomial::new(c.iter().map(|s| q(s)).collect())
    }

    fn series(c: &[&str]) -> TruncatedSeries {
        TruncatedSeries::new(c.iter().map(|s| q(s)).collect())
    }

    fn spec(p: &FactoredPolynomial, t: &str, qq: &[&str]) -> TraceSpec {
        TraceSpec::new(p.clone(), q(t), poly(qq)).unwrap()
    }

    fn x_x1() -> FactoredPolynomial {
        fp(&[("0", 1), ("1", 1)])
    }

    #[test]
    fn approximant_examples() {
        let a = pade_approximant(&series(&["1", "1/2", "1/4", "1/8"]), 1).unwrap();
        assert_eq!((a.s, a.r), (poly(&["-1/2", "1"]), poly(&["1"])));
        let a = pade_approximant(&series(&["1", "0", "0"]), 1).unwrap();
        assert_eq!((a.s, a.r), (poly(&["0", "1"]), poly(&["1"])));
        let a = pade_approximant(&TruncatedSeries::zero(4), 2).unwrap();
        assert_eq!((a.s, a.r), (poly(&["1"]), poly(&[])));
        assert!(pade_approximant(&series(&["1", "0"]), 2).is_err());
    }

    #[test]
    fn approximant_is_stable_under_padding_and_orthogonal() {
        let s = spec(&fp(&[("0", 2), ("1/3", 1), ("i", 1)]), "-1", &["1", "2", "-1", "1/2"]);
        let short = solve_moments(&s, 9).unwrap();
        let long = solve_moments(&s, 25).unwrap();
        for n in 0..=5 {
            let a = pade_approximant(&short, n).unwrap();
            assert_eq!(a, pade_approximant(&long, n).unwrap());
            assert!(orthogonality_defects(&long, &a).is_empty());
            assert_eq!(a.r.gcd(&a.s), DensePolynomial::one());
        }
    }

    #[test]
    fn profile_examples() {
        let prof = degeneracy_profile(&spec(&x_x1(), "2", &["-1", "-1"]), 5).unwrap();
        assert!(!prof[0].n_degenerate);
        assert!(prof.iter().skip(1).all(|e| e.n_degenerate && e.deg_s == 1));

        let prof = degeneracy_profile(&spec(&x_x1(), "2", &["1"]), 3).unwrap();
        assert!(prof[0].n_degenerate);
        assert!(!prof[1].n_degenerate);

        let prof = degeneracy_profile(&TraceSpec::zero(&x_x1(), &q("i")).unwrap(), 4).unwrap();
        assert!(prof.iter().all(|e| e.n_degenerate && e.deg_s == 0));
        assert_eq!(
            serde_json::to_value(&prof[0]).unwrap(),
            serde_json::json!({"n": 0, "degS": 0, "nDegenerate": true})
        );
    }

    #[test]
    fn functional_residual_examples() {
        let r = verify_pade_functional(&spec(&x_x1(), "2", &["-1", "-1"]), 1).unwrap();
        assert_eq!(r.order, None);

        // μ_0 = 0 makes S_1 = 1, R_0 = 0: the residual is -Q/P, order 2.
        let r = verify_pade_functional(&spec(&x_x1(), "2", &["1"]), 1).unwrap();
        assert_eq!((r.deg_s, r.order, r.bound), (0, Some(2), 2));
        let r = verify_pade_functional(&spec(&x_x1(), "2", &["1"]), 2).unwrap();
        assert_eq!(r.deg_s, 2);
        assert!(r.order.unwrap() >= 5);

        let r = verify_pade_functional(&spec(&x_x1(), "1", &["3"]), 1).unwrap();
        assert_eq!(r.order, None);
        let p = fp(&[("0", 1), ("1", 1), ("5/2", 1)]);
        let r = verify_pade_functional(&spec(&p, "1", &["1", "1"]), 1).unwrap();
        assert_eq!(r.deg_s, 1);
        assert!(r.order.unwrap() >= 4);
    }

    #[test]
    fn residual_order_agrees_with_series() {
        let s = spec(&fp(&[("0", 1), ("1", 1), ("5/2", 1)]), "1/3", &["1", "-1", "2"]);
        for n in 1..=5 {
            let r = verify_pade_functional(&s, n).unwrap();
            assert!(r.meets_bound(), "n = {n}: {r:?}");
            let ser = series_of_rational(&r.numerator, &r.denominator, 3 * n + 6).unwrap();
            assert_eq!(ser.valuation().map(|v| v + 1), r.order);
        }
    }

    #[test]
    fn stabilization_example() {
        // Q/P = 1/(x+1/2) - t/(x-1/2) + 1/(x-1/3)^k so that F = 1/x + O(x^{-k}).
        let k = 12u32;
        let t = q("2");
        let p = FactoredPolynomial::new([(q("-1/2"), 1), (q("1/2"), 1), (q("1/3"), k)]);
        let parts = crate::exact::PrincipalParts::from_entries([
            (q("-1/2"), vec![q("1")]),
            (q("1/2"), vec![-&t]),
            (q("1/3"), [vec![q("0"); k as usize - 1], vec![q("1")]].concat()),
        ]);
        let s = TraceSpec::new(p.clone(), t, parts.numerator_over(&p).unwrap()).unwrap();
        let mu = solve_moments(&s, 2 * k as usize).unwrap();
        for n in 1..=(k as usize - 2) {
            assert_eq!(pade_approximant(&mu, n).unwrap().s, DensePolynomial::x(), "n = {n}");
        }
        assert_ne!(pade_approximant(&mu, k as usize - 1).unwrap().s, DensePolynomial::x());
        assert!(!crate::degeneracy::is_degenerate(&s).unwrap());
    }
}
