//! Normal-form arithmetic in the algebra `A_P`.
//!
//! Relations: `q(z) u = u q(z+1)`, `q(z) v = v q(z-1)`, `uv = P(z - 1/2)`,
//! `vu = P(z + 1/2)`. Every element is written uniquely as
//! `Σ_k m_k q_k(z)` with `m_k = u^k` for `k > 0`, `v^{-k}` for `k < 0`,
//! `m_0 = 1`, polynomial on the right. The index `k` is the ad-z eigenvalue.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{DensePolynomial, FactoredPolynomial, GaussianRational};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AlgebraElement {
    #[serde(rename = "P")]
    p: FactoredPolynomial,
    comps: BTreeMap<i64, DensePolynomial>,
}

impl AlgebraElement {
    pub fn zero(p: &FactoredPolynomial) -> Self {
        Self { p: p.clone(), comps: BTreeMap::new() }
    }

    pub fn one(p: &FactoredPolynomial) -> Self {
        Self::from_poly(p, DensePolynomial::one())
    }

    pub fn scalar(p: &FactoredPolynomial, c: GaussianRational) -> Self {
        Self::from_poly(p, DensePolynomial::constant(c))
    }

    /// The degree-zero element `q(z)`.
    pub fn from_poly(p: &FactoredPolynomial, q: DensePolynomial) -> Self {
        Self::monomial(p, 0, q)
    }

    /// `m_k q(z)`.
    pub fn monomial(p: &FactoredPolynomial, k: i64, q: DensePolynomial) -> Self {
        let mut comps = BTreeMap::new();
        if !q.is_zero() {
            comps.insert(k, q);
        }
        Self { p: p.clone(), comps }
    }

    pub fn from_comps(
        p: &FactoredPolynomial,
        comps: impl IntoIterator<Item = (i64, DensePolynomial)>,
    ) -> Self {
        let mut out = Self::zero(p);
        for (k, q) in comps {
            out.add_component(k, &q);
        }
        out
    }

    pub fn u(p: &FactoredPolynomial) -> Self {
        Self::monomial(p, 1, DensePolynomial::one())
    }

    pub fn v(p: &FactoredPolynomial) -> Self {
        Self::monomial(p, -1, DensePolynomial::one())
    }

    pub fn z(p: &FactoredPolynomial) -> Self {
        Self::from_poly(p, DensePolynomial::x())
    }

    pub fn ambient(&self) -> &FactoredPolynomial {
        &self.p
    }

    pub fn comps(&self) -> &BTreeMap<i64, DensePolynomial> {
        &self.comps
    }

    pub fn component(&self, k: i64) -> DensePolynomial {
        self.comps.get(&k).cloned().unwrap_or_else(DensePolynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn add_component(&mut self, k: i64, q: &DensePolynomial) {
        let sum = match self.comps.get(&k) {
            Some(old) => old + q,
            None => q.clone(),
        };
        if sum.is_zero() {
            self.comps.remove(&k);
        } else {
            self.comps.insert(k, sum);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::from_comps(&self.p, self.comps.iter().map(|(k, q)| (*k, q.scale(c))))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (k, q) in &other.comps {
            out.add_component(*k, q);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        multiply_normal(self, other)
    }

    /// `[z, a] = z a - a z`.
    pub fn ad_z(&self) -> Self {
        let z = Self::z(&self.p);
        (&z * self) - &(self * &z)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.p), |acc, _| &acc * self)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-GaussianRational::one())
    }
}

/// The operator forms panic on mismatched ambient algebras; use the `try_`
/// methods when that can happen.
impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("same ambient algebra")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("same ambient algebra")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        multiply_normal(self, rhs).expect("same ambient algebra")
    }
}

impl Sub<&AlgebraElement> for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        &self - rhs
    }
}

/// Computes `m_i m_j = m_{i+j} c(z)` and memoizes `c` and the shifted copies
/// of `P` it is built from.
struct MonomialProducts<'a> {
    p: &'a FactoredPolynomial,
    shifted: HashMap<GaussianRational, DensePolynomial>,
    products: HashMap<(i64, i64), DensePolynomial>,
}

impl<'a> MonomialProducts<'a> {
    fn new(p: &'a FactoredPolynomial) -> Self {
        Self { p, shifted: HashMap::new(), products: HashMap::new() }
    }

    fn p_shifted(&mut self, h: GaussianRational) -> DensePolynomial {
        let p = self.p;
        self.shifted.entry(h).or_insert_with_key(|h| p.expand().shift(h)).clone()
    }

    fn coefficient(&mut self, i: i64, j: i64) -> DensePolynomial {
        if i == 0 || j == 0 || (i > 0) == (j > 0) {
            return DensePolynomial::one();
        }
        if let Some(c) = self.products.get(&(i, j)) {
            return c.clone();
        }
        let half = GaussianRational::half();
        let m = i.abs().min(j.abs());
        let mut c = DensePolynomial::one();
        for s in 0..m {
            // u^i v^b: Π P(z - b + s + 1/2); v^a u^b: Π P(z + b - s - 1/2).
            let h = if i > 0 {
                &GaussianRational::from(s - j.abs()) + &half
            } else {
                &GaussianRational::from(j - s) - &half
            };
            c = &c * &self.p_shifted(h);
        }
        self.products.insert((i, j), c.clone());
        c
    }
}

/// Normal form of `a·b`: `(m_i q)(m_j r) = m_{i+j} c_{ij}(z) q(z + j) r(z)`.
pub fn multiply_normal(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.check_ambient(b)?;
    let mut table = MonomialProducts::new(&a.p);
    let mut out = AlgebraElement::zero(&a.p);
    for (&i, q) in &a.comps {
        for (&j, r) in &b.comps {
            let c = table.coefficient(i, j);
            let term = &(&c * &q.shift(&GaussianRational::from(j))) * r;
            out.add_component(i + j, &term);
        }
    }
    Ok(out)
}

/// The `A_k` component of `a`.
pub fn grade_project(a: &AlgebraElement, k: i64) -> AlgebraElement {
    AlgebraElement::monomial(&a.p, k, a.component(k))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum MorphismSpec {
    /// `u ↦ t^{-1} u`, `v ↦ t v`, `z ↦ z`.
    GTwist { t: GaussianRational },
    /// `u ↦ v`, `v ↦ (-1)^d u`, `z ↦ -z`, into the algebra of `P(-x)` made monic.
    Negate,
    /// `z ↦ z + r` into the algebra of `P(x + r)`.
    Shift { r: GaussianRational },
    /// `u ↦ Q1(z - 1/2) u`, `v ↦ Q2(z + 1/2) v`, `z ↦ z`, from `A_P` into
    /// `A_{P / (Q1 Q2)}`.
    Pullback { q1: DensePolynomial, q2: DensePolynomial },
}

impl MorphismSpec {
    /// Defining polynomial of the target algebra when the source is `A_P`.
    pub fn target(&self, p: &FactoredPolynomial) -> Result<FactoredPolynomial> {
        match self {
            Self::GTwist { t } => {
                if t.is_zero() {
                    return Err(Error::ZeroTwist);
                }
                Ok(p.clone())
            }
            Self::Negate => Ok(FactoredPolynomial::new(p.roots().iter().map(|(a, m)| (-a, *m)))),
            Self::Shift { r } => Ok(FactoredPolynomial::new(p.roots().iter().map(|(a, m)| (a - r, *m)))),
            Self::Pullback { q1, q2 } => divide_out(p, &(q1 * q2)),
        }
    }
}

/// `P / q` for a monic `q` dividing `P`, as a factored polynomial.
pub fn divide_out(p: &FactoredPolynomial, q: &DensePolynomial) -> Result<FactoredPolynomial> {
    if !q.is_monic() {
        return Err(Error::NotDivisible(format!("Q1·Q2 = {q} is not monic")));
    }
    let mut rest = q.clone();
    let mut target = Vec::new();
    for (a, m) in p.roots() {
        let lin = DensePolynomial::linear(a);
        let mut taken = 0;
        while taken < *m {
            let (quot, rem) = rest.div_rem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            taken += 1;
        }
        target.push((a.clone(), m - taken));
    }
    if rest != DensePolynomial::one() {
        return Err(Error::NotDivisible(format!("Q1·Q2 = {q} does not divide P = {p}")));
    }
    Ok(FactoredPolynomial::new(target))
}

/// Applies a morphism to an element of its source algebra.
pub fn morphism_apply(m: &MorphismSpec, a: &AlgebraElement) -> Result<AlgebraElement> {
    let target = m.target(&a.p)?;
    match m {
        MorphismSpec::GTwist { t } => {
            let mut out = AlgebraElement::zero(&target);
            for (&k, q) in &a.comps {
                out.add_component(k, &q.scale(&t.pow(-k)?));
            }
            Ok(out)
        }
        MorphismSpec::Negate => {
            let d = a.p.degree() as i64;
            let mut out = AlgebraElement::zero(&target);
            for (&k, q) in &a.comps {
                let sign = if k < 0 && (d * k) % 2 != 0 { -GaussianRational::one() } else { GaussianRational::one() };
                out.add_component(-k, &q.reflect().scale(&sign));
            }
            Ok(out)
        }
        MorphismSpec::Shift { r } => {
            let mut out = AlgebraElement::zero(&target);
            for (&k, q) in &a.comps {
                out.add_component(k, &q.shift(r));
            }
            Ok(out)
        }
        MorphismSpec::Pullback { q1, q2 } => {
            let half = GaussianRational::half();
            let image_u = AlgebraElement::monomial(&target, 1, q1.shift(&half));
            let image_v = AlgebraElement::monomial(&target, -1, q2.shift(&-&half));
            let mut out = AlgebraElement::zero(&target);
            for (&k, q) in &a.comps {
                let gen = if k > 0 { &image_u } else { &image_v };
                let head = gen.pow(k.unsigned_abs() as u32);
                let term = &head * &AlgebraElement::from_poly(&target, q.clone());
                out = &out + &term;
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use proptest::test_runner::RngSeed;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn fp(roots: &[(&str, u32)]) -> FactoredPolynomial {
        FactoredPolynomial::new(roots.iter().map(|(r, m)| (q(r), *m)))
    }

    fn poly(c: &[&str]) -> DensePolynomial {
        DensePolynomial::new(c.iter().map(|s| q(s)).collect())
    }

    fn x_x1() -> FactoredPolynomial {
        fp(&[("0", 1), ("1", 1)])
    }

    #[test]
    fn defining_relations() {
        let p = x_x1();
        let (u, v) = (AlgebraElement::u(&p), AlgebraElement::v(&p));
        assert_eq!(&u * &v, AlgebraElement::from_poly(&p, poly(&["3/4", "-2", "1"])));
        assert_eq!(&v * &u, AlgebraElement::from_poly(&p, poly(&["-1/4", "0", "1"])));
        let z = AlgebraElement::z(&p);
        assert_eq!(&z * &u, AlgebraElement::monomial(&p, 1, poly(&["1", "1"])));
        assert_eq!(&z * &v, AlgebraElement::monomial(&p, -1, poly(&["-1", "1"])));
    }

    #[test]
    fn grade_projection() {
        let p = x_x1();
        let a = &AlgebraElement::u(&p) + &AlgebraElement::from_poly(&p, poly(&["0", "0", "1"]));
        assert_eq!(grade_project(&a, 0), AlgebraElement::from_poly(&p, poly(&["0", "0", "1"])));
        assert_eq!(grade_project(&a, 1), AlgebraElement::u(&p));
        assert!(grade_project(&a, 5).is_zero());
        let uv = &AlgebraElement::u(&p) * &AlgebraElement::v(&p);
        assert_eq!(grade_project(&uv, 0), uv);
    }

    #[test]
    fn morphism_examples() {
        let p = x_x1();
        let g = MorphismSpec::GTwist { t: q("2") };
        assert_eq!(
            morphism_apply(&g, &AlgebraElement::u(&p)).unwrap(),
            AlgebraElement::monomial(&p, 1, poly(&["1/2"]))
        );
        assert!(matches!(
            morphism_apply(&MorphismSpec::GTwist { t: q("0") }, &AlgebraElement::u(&p)),
            Err(Error::ZeroTwist)
        ));
        let neg = morphism_apply(&MorphismSpec::Negate, &AlgebraElement::z(&p)).unwrap();
        assert_eq!(neg.comps()[&0], poly(&["0", "-1"]));
        assert_eq!(neg.ambient(), &fp(&[("-1", 1), ("0", 1)]));

        // A_{x·P1} -> A_{P1} with P1 = x - 1.
        let pb = MorphismSpec::Pullback { q1: DensePolynomial::x(), q2: DensePolynomial::one() };
        let image = morphism_apply(&pb, &AlgebraElement::u(&p)).unwrap();
        assert_eq!(image.ambient(), &fp(&[("1", 1)]));
        // (z - 1/2) u = u (z + 1/2)
        assert_eq!(image.comps()[&1], poly(&["1/2", "1"]));
    }

    #[test]
    fn pullback_divisibility() {
        let p = x_x1();
        let bad = MorphismSpec::Pullback { q1: DensePolynomial::linear(&q("2")), q2: DensePolynomial::one() };
        assert!(matches!(bad.target(&p), Err(Error::NotDivisible(_))));
        let nonmonic = MorphismSpec::Pullback { q1: poly(&["0", "2"]), q2: DensePolynomial::one() };
        assert!(nonmonic.target(&p).is_err());
        let scaled = MorphismSpec::Pullback { q1: poly(&["0", "2"]), q2: poly(&["1/2"]) };
        assert_eq!(scaled.target(&p).unwrap(), fp(&[("1", 1)]));
    }

    fn arb_scalar() -> impl Strategy<Value = GaussianRational> {
        (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(n, d, im)| GaussianRational::complex(n, d, im, 1))
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = DensePolynomial> {
        prop::collection::vec(arb_scalar(), 0..=max_deg + 1).prop_map(DensePolynomial::new)
    }

    fn arb_factored() -> impl Strategy<Value = FactoredPolynomial> {
        prop::collection::vec(((-3i64..=3), (1i64..=3), (1u32..=2)), 1..=3).prop_map(|roots| {
            FactoredPolynomial::new(roots.into_iter().map(|(n, d, m)| (GaussianRational::ratio(n, d), m)))
        })
    }

    fn arb_element(p: FactoredPolynomial) -> impl Strategy<Value = AlgebraElement> {
        prop::collection::vec((-3i64..=3, arb_poly(2)), 0..=3)
            .prop_map(move |parts| AlgebraElement::from_comps(&p, parts))
    }

    fn arb_triple() -> impl Strategy<Value = (AlgebraElement, AlgebraElement, AlgebraElement)> {
        arb_factored().prop_flat_map(|p| (arb_element(p.clone()), arb_element(p.clone()), arb_element(p)))
    }

    fn arb_twist() -> impl Strategy<Value = GaussianRational> {
        arb_scalar().prop_filter("nonzero", |t| !t.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 300, rng_seed: RngSeed::Fixed(0x7ace), ..ProptestConfig::default() })]

        #[test]
        fn associativity((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn grading_is_ad_z_eigenvalue((a, _, _) in arb_triple()) {
            for &k in a.comps().keys() {
                let ak = grade_project(&a, k);
                prop_assert_eq!(ak.ad_z(), ak.scale(&GaussianRational::from(k)));
            }
            let total = a.comps().keys().fold(AlgebraElement::zero(a.ambient()), |acc, &k| &acc + &grade_project(&a, k));
            prop_assert_eq!(total, a);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 200, rng_seed: RngSeed::Fixed(0x7ace), ..ProptestConfig::default() })]

        #[test]
        fn g_t_is_an_automorphism((a, b, _) in arb_triple(), t in arb_twist()) {
            let g = MorphismSpec::GTwist { t: t.clone() };
            let g_inv = MorphismSpec::GTwist { t: t.inv().unwrap() };
            let lhs = morphism_apply(&g, &(&a * &b)).unwrap();
            let rhs = &morphism_apply(&g, &a).unwrap() * &morphism_apply(&g, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(morphism_apply(&g_inv, &morphism_apply(&g, &a).unwrap()).unwrap(), a.clone());
            prop_assert_eq!(grade_project(&morphism_apply(&g, &a).unwrap(), 0), grade_project(&a, 0));
        }

        #[test]
        fn negate_and_shift_are_homomorphisms((a, b, _) in arb_triple(), r in arb_scalar()) {
            for m in [MorphismSpec::Negate, MorphismSpec::Shift { r }] {
                let lhs = morphism_apply(&m, &(&a * &b)).unwrap();
                let rhs = &morphism_apply(&m, &a).unwrap() * &morphism_apply(&m, &b).unwrap();
                prop_assert_eq!(lhs, rhs);
                let one = AlgebraElement::one(a.ambient());
                prop_assert_eq!(morphism_apply(&m, &one).unwrap(), AlgebraElement::one(&m.target(a.ambient()).unwrap()));
            }
        }

        #[test]
        fn negate_intertwines_g_t_and_g_inverse((a, _, _) in arb_triple(), t in arb_twist()) {
            let g = MorphismSpec::GTwist { t: t.clone() };
            let g_inv = MorphismSpec::GTwist { t: t.inv().unwrap() };
            let lhs = morphism_apply(&MorphismSpec::Negate, &morphism_apply(&g, &a).unwrap()).unwrap();
            let rhs = morphism_apply(&g_inv, &morphism_apply(&MorphismSpec::Negate, &a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_is_a_homomorphism_commuting_with_g_t(
            (a, b, _) in arb_factored().prop_flat_map(|p1| {
                // source P = (x - 1/2)(x + 1) P1 with Q1 = x - 1/2, Q2 = x + 1
                let p = FactoredPolynomial::new(
                    p1.roots().iter().cloned().chain([(GaussianRational::half(), 1), (GaussianRational::from(-1), 1)]),
                );
                (arb_element(p.clone()), arb_element(p.clone()), arb_element(p))
            }),
            t in arb_twist(),
        ) {
            let m = MorphismSpec::Pullback {
                q1: DensePolynomial::linear(&GaussianRational::half()),
                q2: DensePolynomial::linear(&GaussianRational::from(-1)),
            };
            let lhs = morphism_apply(&m, &(&a * &b)).unwrap();
            let rhs = &morphism_apply(&m, &a).unwrap() * &morphism_apply(&m, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
            let g = MorphismSpec::GTwist { t };
            let lhs = morphism_apply(&m, &morphism_apply(&g, &a).unwrap()).unwrap();
            let rhs = morphism_apply(&g, &morphism_apply(&m, &a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            // identity on C[z]
            let z0 = grade_project(&a, 0);
            let image = morphism_apply(&m, &z0).unwrap();
            prop_assert_eq!(image.comps(), z0.comps());
        }
    }
}
