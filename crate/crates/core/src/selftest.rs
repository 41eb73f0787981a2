//! Seeded consistency sweep over the catalog; backs the `selftest` command.

use serde::Serialize;

use crate::algebra::{morphism_apply, MorphismSpec};
use crate::catalog;
use crate::degeneracy::{degenerate_basis, delta_invariant, is_degenerate, pole_bounds, reconstruct_rational};
use crate::error::{Error, Result};
use crate::exact::{series_of_rational, FactoredPolynomial, GaussianRational};
use crate::findim::{build_string_module, check_relations, check_twisting, module_trace};
use crate::lerch::verify_lerch_recursion;
use crate::pade::{pade_approximant, verify_pade_functional};
use crate::parse::parse_factored;
use crate::tracespace::{evaluate_trace, hankel_rank, solve_moments, trace_dim, trace_from_moments, TraceSpec};

/// The three independent degeneracy verdicts, at the bound `B` of [`pole_bounds`].
/// Both moment-side tests look at the window `n = B+1 ..= B+6`: a single
/// `(B+1)×(B+1)` block can be singular by accident (e.g. `μ_0 = 0` when `B = 0`).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TriOracle {
    pub delta: bool,
    pub hankel: bool,
    pub pade: bool,
}

impl TriOracle {
    pub fn agrees(&self) -> bool {
        self.delta == self.hankel && self.hankel == self.pade
    }
}

pub fn tri_oracle(spec: &TraceSpec) -> Result<TriOracle> {
    let b = pole_bounds(spec.p()).total as usize;
    let moments = solve_moments(spec, 2 * (b + 5))?;
    let s_b = pade_approximant(&moments, b)?.s;
    let mut pade = true;
    for n in b + 1..=b + 5 {
        pade &= pade_approximant(&moments, n)?.s == s_b;
    }
    Ok(TriOracle {
        delta: is_degenerate(spec)?,
        hankel: (b + 1..=b + 6).map(|n| hankel_rank(&moments, n)).collect::<Result<Vec<_>>>()?.iter().all(|&r| r <= b),
        pade,
    })
}

/// Pairs `(a, j)` with `a` and `a + j` both roots, `j ≥ 1`.
pub fn integer_gaps(p: &FactoredPolynomial) -> Vec<(GaussianRational, usize)> {
    let mut out = Vec::new();
    for (a, _) in p.roots() {
        for (b, _) in p.roots() {
            if let Some(j) = (b - a).as_integer().and_then(|j| usize::try_from(j).ok()) {
                if j > 0 {
                    out.push((a.clone(), j));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Tally {
    result: CheckResult,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { result: CheckResult { name, passed: 0, failed: 0, failures: Vec::new() } }
    }

    fn record(&mut self, label: impl FnOnce() -> String, outcome: Result<bool>) {
        match outcome {
            Ok(true) => self.result.passed += 1,
            Ok(false) => self.fail(label()),
            Err(e) => self.fail(format!("{}: {e}", label())),
        }
    }

    fn fail(&mut self, msg: String) {
        self.result.failed += 1;
        if self.result.failures.len() < 5 {
            self.result.failures.push(msg);
        }
    }
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = catalog::rng(seed);
    let entries = catalog::entries();
    let mut checks = Vec::new();

    let mut t = Tally::new("dimensions");
    for (name, p, tw) in &entries {
        t.record(
            || format!("{name}, t = {tw}"),
            (|| {
                let d = p.degree();
                let dim = trace_dim(p, tw)?;
                let expected = if tw == &GaussianRational::from(1) { d - 1 } else { d };
                Ok(dim == expected && degenerate_basis(p, tw)?.len() == delta_invariant(p).0)
            })(),
        );
    }
    checks.push(t.result);

    let mut t = Tally::new("twisted-trace-identity");
    for (name, p, tw) in &entries {
        let spec = TraceSpec::new(p.clone(), tw.clone(), catalog::random_q(&mut rng, p, tw));
        for _ in 0..3 {
            let (a, b) = (catalog::random_element(&mut rng, p), catalog::random_element(&mut rng, p));
            t.record(
                || format!("{name}, t = {tw}"),
                spec.clone().and_then(|s| {
                    let gb = morphism_apply(&MorphismSpec::GTwist { t: tw.clone() }, &b)?;
                    Ok(evaluate_trace(&s, &a.try_mul(&b)?)? == evaluate_trace(&s, &gb.try_mul(&a)?)?)
                }),
            );
        }
    }
    checks.push(t.result);

    let mut t = Tally::new("tri-oracle");
    let mut r = Tally::new("reconstruction");
    for (name, p, tw) in &entries {
        let basis = match degenerate_basis(p, tw) {
            Ok(b) => b,
            Err(e) => {
                t.fail(format!("{name}, t = {tw}: {e}"));
                continue;
            }
        };
        for spec in &basis {
            r.record(
                || format!("{name}, t = {tw}, Q = {}", spec.q()),
                (|| {
                    let f = reconstruct_rational(spec)?;
                    Ok(series_of_rational(&f.numer, f.denom.expand(), 20)? == solve_moments(spec, 20)?)
                })(),
            );
        }
        let randoms = (0..2).map(|_| TraceSpec::new(p.clone(), tw.clone(), catalog::random_q(&mut rng, p, tw)));
        for spec in basis.iter().cloned().map(Ok).chain(randoms) {
            t.record(|| format!("{name}, t = {tw}"), spec.and_then(|s| Ok(tri_oracle(&s)?.agrees())));
        }
    }
    checks.push(t.result);
    checks.push(r.result);

    let mut t = Tally::new("pade-functional-bound");
    for (name, p, tw) in &entries {
        let spec = TraceSpec::new(p.clone(), tw.clone(), catalog::random_q(&mut rng, p, tw));
        for n in 1..=3 {
            t.record(
                || format!("{name}, t = {tw}, n = {n}"),
                spec.clone().and_then(|s| Ok(verify_pade_functional(&s, n)?.meets_bound())),
            );
        }
    }
    checks.push(t.result);

    let mut t = Tally::new("string-modules");
    for (name, p, tw) in &entries {
        for (a, j) in integer_gaps(p) {
            let lambda = catalog::random_scalar(&mut rng);
            t.record(
                || format!("{name}, t = {tw}, a = {a}, j = {j}"),
                (|| {
                    let m = build_string_module(p, &a, j, &lambda, tw)?;
                    let spec = trace_from_moments(p, tw, &module_trace(&m, 2 * p.degree() + 4))?;
                    Ok(check_relations(&m, p).is_empty() && check_twisting(&m, tw)? && is_degenerate(&spec)?)
                })(),
            );
        }
    }
    checks.push(t.result);

    let mut t = Tally::new("lerch-recursion");
    t.record(
        || "x(x-1), t = 1/2".into(),
        (|| {
            let spec = TraceSpec::new(parse_factored("x*(x-1)")?, GaussianRational::ratio(1, 2), crate::DensePolynomial::one())?;
            let samples: Vec<_> = (0..20)
                .map(|k| num_complex::Complex64::new(2.1 + 0.2 * k as f64, 0.3 * (k % 4) as f64 - 0.45))
                .collect();
            Ok(verify_lerch_recursion(&spec, &samples)?.max_residual < 1e-9)
        })(),
    );
    checks.push(t.result);

    let passed = checks.iter().map(|c| c.passed).sum();
    let failed = checks.iter().map(|c| c.failed).sum();
    SelftestReport { seed, passed, failed, checks }
}

/// Maps a failed report to the error the CLI reports with exit code 1.
pub fn require_pass(report: &SelftestReport) -> Result<()> {
    if report.ok() {
        Ok(())
    } else {
        Err(Error::Falsified(format!("{} selftest checks failed", report.failed)))
    }
}
