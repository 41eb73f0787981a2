//! Acceptance sweep over the catalog. Runs without the libtest harness so
//! each criterion prints exactly one PASS/FAIL line; exits nonzero on failure.

use std::time::Instant;

use num_complex::Complex64;
use num_traits::{One, Zero};
use twisted_traces::algebra::{morphism_apply, MorphismSpec};
use twisted_traces::catalog::{self, random_element, random_q, random_scalar};
use twisted_traces::degeneracy::{
    decompose_pole_order, decompose_two_root, degenerate_basis, delta_criterion, delta_invariant, is_degenerate,
    reconstruct_rational,
};
use twisted_traces::exact::{series_of_rational, TruncatedSeries};
use twisted_traces::findim::{build_jordan_module, build_string_module, module_trace};
use twisted_traces::lerch::{lerch_phi, verify_lerch_recursion};
use twisted_traces::pade::{degeneracy_profile, pade_approximant, verify_pade_functional};
use twisted_traces::parse::parse_factored;
use twisted_traces::selftest::{integer_gaps, tri_oracle};
use twisted_traces::tracespace::{
    evaluate_trace, moment_functional, monomial_basis, solve_moments, trace_dim, trace_from_moments, TraceSpec,
};
use twisted_traces::{DensePolynomial, FactoredPolynomial, GaussianRational, PrincipalParts, Result};

const SEED: u64 = 20240611;

fn q(s: &str) -> GaussianRational {
    s.parse().unwrap()
}

fn poly(c: &[&str]) -> DensePolynomial {
    DensePolynomial::new(c.iter().map(|s| q(s)).collect())
}

fn fp(s: &str) -> FactoredPolynomial {
    parse_factored(s).unwrap()
}

/// Outcome of one criterion: `Ok(detail)` passes, `Err(reason)` fails.
type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>, ctx: impl FnOnce() -> String) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{}: {e}", ctx()))
}

/// Moments of `Σ c / (x - a)^k` straight from the geometric expansion.
fn moments_of_parts(parts: &[(GaussianRational, u32, GaussianRational)], order: usize) -> TruncatedSeries {
    let mut mu = vec![GaussianRational::zero(); order + 1];
    for (a, k, c) in parts {
        // (x - a)^{-k} = Σ_m binom(m, k-1) a^{m-k+1} x^{-m-1}
        for (m, slot) in mu.iter_mut().enumerate() {
            let k = *k as usize;
            if m + 1 < k {
                continue;
            }
            let binom = (0..k - 1).fold(GaussianRational::one(), |acc, i| {
                &acc * &GaussianRational::ratio((m - i) as i64, (i + 1) as i64)
            });
            let pw = a.pow((m + 1 - k) as i64).unwrap();
            *slot += &(&(c * &binom) * &pw);
        }
    }
    TruncatedSeries::new(mu)
}

fn random_degenerate(rng: &mut impl rand::Rng, basis: &[TraceSpec]) -> Option<TraceSpec> {
    let mut acc: Option<TraceSpec> = None;
    for b in basis {
        let term = b.scale(&random_scalar(rng));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).unwrap(),
        });
    }
    acc.filter(|s| !s.is_zero())
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (name, p, t) in catalog::entries() {
        let d = p.degree();
        let dim = lift(trace_dim(&p, &t), || name.into())?;
        let expected = if t.is_one() { d - 1 } else { d };
        ensure(dim == expected, || format!("{name}, t = {t}: dim {dim}, expected {expected}"))?;
        let basis = lift(degenerate_basis(&p, &t), || name.into())?;
        let delta = delta_invariant(&p).0;
        ensure(basis.len() == delta, || format!("{name}, t = {t}: basis {} vs delta {delta}", basis.len()))?;
        for b in &basis {
            ensure(lift(is_degenerate(b), || name.into())?, || format!("{name}, t = {t}: basis vector {} nondegenerate", b.q()))?;
        }
        checked += 1;
    }
    let p = fp("x*(x-1)*(x-2)");
    for t in catalog::twists() {
        ensure(delta_invariant(&p).0 == 2, || "delta(x(x-1)(x-2)) != 2".into())?;
        let all_degenerate = monomial_basis(&p, &t)
            .unwrap()
            .iter()
            .all(|s| is_degenerate(s).unwrap());
        if t.is_one() {
            ensure(all_degenerate, || "x(x-1)(x-2), t = 1 has a nondegenerate trace".into())?;
        }
        if t == q("2") {
            ensure(!all_degenerate, || "x(x-1)(x-2), t = 2 has no nondegenerate trace".into())?;
        }
    }
    Ok(format!("{checked} (P, t) pairs"))
}

fn criterion_2() -> Outcome {
    let mut rng = catalog::rng(SEED);
    let mut pairs = 0;
    for (name, p, t) in catalog::entries() {
        let g = MorphismSpec::GTwist { t: t.clone() };
        for _ in 0..200 {
            let spec = TraceSpec::new(p.clone(), t.clone(), random_q(&mut rng, &p, &t)).unwrap();
            let (a, b) = (random_element(&mut rng, &p), random_element(&mut rng, &p));
            let lhs = lift(evaluate_trace(&spec, &a.try_mul(&b).unwrap()), || name.into())?;
            let gb = morphism_apply(&g, &b).unwrap();
            let rhs = lift(evaluate_trace(&spec, &gb.try_mul(&a).unwrap()), || name.into())?;
            ensure(lhs == rhs, || format!("{name}, t = {t}: T(ab) = {lhs} but T(g(b)a) = {rhs}"))?;
            pairs += 1;
        }
        let spec = TraceSpec::new(p.clone(), t.clone(), random_q(&mut rng, &p, &t)).unwrap();
        let pe = p.expand();
        let half = GaussianRational::half();
        let mu = solve_moments(&spec, 20 + p.degree()).unwrap();
        for k in 0..=20 {
            let s = DensePolynomial::monomial(GaussianRational::one(), k);
            let minus = &s.shift(&-&half) * &pe.shift(&-&half);
            let plus = &s.shift(&half) * &pe.shift(&half);
            let (l, r) = (moment_functional(&mu, &minus).unwrap(), moment_functional(&mu, &plus).unwrap());
            ensure(l == &t * &r, || format!("{name}, t = {t}: shifted identity fails at k = {k}"))?;
        }
    }
    Ok(format!("{pairs} random pairs, shifted identity for k <= 20"))
}

fn criterion_3() -> Outcome {
    // One seeded stream per (P, t) so the entries can run in parallel.
    let per_entry: Vec<std::result::Result<(usize, usize), String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = catalog::entries()
            .into_iter()
            .enumerate()
            .map(|(i, (name, p, t))| {
                scope.spawn(move || {
                    let mut rng = catalog::rng(SEED + 3 + 1000 * i as u64);
                    let basis = degenerate_basis(&p, &t).unwrap();
                    let mut specs = basis.clone();
                    specs.extend((0..50).map(|_| TraceSpec::new(p.clone(), t.clone(), random_q(&mut rng, &p, &t)).unwrap()));
                    specs.extend((0..10).filter_map(|_| random_degenerate(&mut rng, &basis)));
                    let (mut traces, mut degenerate) = (0, 0);
                    for s in &specs {
                        let v = lift(tri_oracle(s), || format!("{name}, t = {t}"))?;
                        ensure(v.agrees(), || format!("{name}, t = {t}, Q = {}: {v:?}", s.q()))?;
                        traces += 1;
                        degenerate += usize::from(v.delta);
                    }
                    Ok((traces, degenerate))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("panicked".into()))).collect()
    });
    let (mut traces, mut degenerate) = (0, 0);
    for r in per_entry {
        let (a, b) = r?;
        traces += a;
        degenerate += b;
    }
    Ok(format!("{traces} traces, {degenerate} degenerate"))
}

fn criterion_4() -> Outcome {
    let mut rng = catalog::rng(SEED + 4);
    let mut found = 0;
    for (name, p, t) in catalog::entries() {
        let basis = degenerate_basis(&p, &t).unwrap();
        let mut specs = basis.clone();
        specs.extend((0..3).filter_map(|_| random_degenerate(&mut rng, &basis)));
        for s in &specs {
            let ctx = || format!("{name}, t = {t}, Q = {}", s.q());
            let f = lift(reconstruct_rational(s), ctx)?;
            let mu = solve_moments(s, 60).unwrap();
            let series = lift(series_of_rational(&f.numer, f.denom.expand(), 50), ctx)?;
            ensure(series == mu.truncate(50), || format!("{}: reconstruction disagrees", ctx()))?;
            let gen = f.denom.expand();
            for _ in 0..50 {
                let r = catalog::random_poly(&mut rng, 5);
                let v = moment_functional(&mu, &(gen * &r)).unwrap();
                ensure(v.is_zero(), || format!("{}: T(S r) = {v}", ctx()))?;
            }
            found += 1;
        }
    }
    Ok(format!("{found} degenerate traces"))
}

fn criterion_5() -> Outcome {
    let p = fp("x*(x-1)");
    let s = TraceSpec::new(p.clone(), q("2"), poly(&["-1", "-1"])).unwrap();
    let f = reconstruct_rational(&s).map_err(|e| e.to_string())?;
    ensure(f.numer == DensePolynomial::one() && f.denom == FactoredPolynomial::new([(q("1/2"), 1)]), || {
        format!("F = {} / {:?}", f.numer, f.denom)
    })?;
    let report = delta_criterion(&s).map_err(|e| e.to_string())?;
    ensure(report.degenerate && report.deltas.iter().all(|d| d.value.is_zero()), || "Delta != 0".into())?;
    let expected = TruncatedSeries::new((0..=30).map(|n| q("1/2").pow(n).unwrap()).collect());
    ensure(solve_moments(&s, 30).unwrap() == expected, || "moments != (1/2)^n".into())?;

    let s = TraceSpec::new(p, q("2"), DensePolynomial::one()).unwrap();
    let report = delta_criterion(&s).map_err(|e| e.to_string())?;
    let values: Vec<_> = report.deltas.iter().map(|d| d.value.clone()).collect();
    ensure(values == vec![q("-1/2")], || format!("Delta = {values:?}"))?;
    let prof = degeneracy_profile(&s, 3).map_err(|e| e.to_string())?;
    ensure(prof[0].n_degenerate && !prof[1].n_degenerate, || format!("profile {prof:?}"))?;
    Ok("both worked examples exact".into())
}

fn criterion_6() -> Outcome {
    let p = fp("x*(x-2)");
    let t = q("3");
    let m = build_string_module(&p, &q("0"), 2, &GaussianRational::one(), &t).map_err(|e| e.to_string())?;
    let mu = module_trace(&m, 20);
    // α = diag(1, t) on z-eigenvalues 1/2, 3/2.
    let oracle = moments_of_parts(&[(q("1/2"), 1, q("1")), (q("3/2"), 1, t.clone())], 20);
    ensure(mu == oracle && mu.coeffs()[..3] == [q("4"), q("5"), q("7")], || format!("string moments {:?}", &mu.coeffs()[..3]))?;
    let spec = trace_from_moments(&p, &t, &mu).map_err(|e| e.to_string())?;
    ensure(is_degenerate(&spec).unwrap(), || "string-module trace fails the Delta criterion".into())?;

    let pj = fp("(x+1/2)^2*(x-3/2)^2");
    for t in catalog::twists() {
        let m = build_jordan_module(&pj, &q("0"), 2, 2, &GaussianRational::one(), &t).map_err(|e| e.to_string())?;
        let mu = module_trace(&m, 20);
        let oracle = moments_of_parts(&[(q("0"), 2, q("1")), (q("1"), 2, t.clone())], 20);
        ensure(mu == oracle, || format!("Jordan moments at t = {t}"))?;
        let head = [q("0"), &q("1") + &t, &q("2") * &t, &q("3") * &t];
        ensure(mu.coeffs()[..4] == head, || format!("Jordan head at t = {t}"))?;
    }

    let mut rng = catalog::rng(SEED + 6);
    let mut modules = 0;
    for (name, p, t) in catalog::entries() {
        for (a, j) in integer_gaps(&p) {
            let m = build_string_module(&p, &a, j, &random_scalar(&mut rng), &t).map_err(|e| e.to_string())?;
            let spec = lift(trace_from_moments(&p, &t, &module_trace(&m, 2 * p.degree() + 4)), || name.into())?;
            let f = lift(reconstruct_rational(&spec), || name.into())?;
            ensure(f.parts.max_order() <= 1, || format!("{name}, t = {t}: string trace has order {}", f.parts.max_order()))?;
            modules += 1;
        }
    }
    Ok(format!("string and Jordan moments exact, {modules} string modules simple-pole"))
}

fn criterion_7() -> Outcome {
    let mut rng = catalog::rng(SEED + 7);
    let (mut entries, mut non_normal) = (0, 0);
    for (name, p, t) in catalog::entries() {
        let mut specs = vec![TraceSpec::new(p.clone(), t.clone(), random_q(&mut rng, &p, &t)).unwrap()];
        specs.extend(monomial_basis(&p, &t).unwrap());
        let extra = usize::from(t.is_one());
        for s in &specs {
            for n in 1..=6 {
                let r = lift(verify_pade_functional(s, n), || format!("{name}, t = {t}, n = {n}"))?;
                if r.deg_s == n {
                    ensure(r.order.is_none_or(|o| o >= 2 * n + 1 + extra), || {
                        format!("{name}, t = {t}, Q = {}, n = {n}: order {:?}", s.q(), r.order)
                    })?;
                } else {
                    non_normal += 1;
                    ensure(r.meets_bound(), || format!("{name}, t = {t}, n = {n}: {r:?}"))?;
                }
                entries += 1;
            }
        }
    }

    let k = 12u32;
    let t = q("2");
    let p = FactoredPolynomial::new([(q("-1/2"), 1), (q("1/2"), 1), (q("1/3"), k)]);
    let parts = PrincipalParts::from_entries([
        (q("-1/2"), vec![q("1")]),
        (q("1/2"), vec![-&t]),
        (q("1/3"), [vec![q("0"); k as usize - 1], vec![q("1")]].concat()),
    ]);
    let s = TraceSpec::new(p.clone(), t, parts.numerator_over(&p).unwrap()).unwrap();
    let mu = solve_moments(&s, 2 * k as usize).unwrap();
    for n in 1..=6 {
        ensure(pade_approximant(&mu, n).unwrap().s == DensePolynomial::x(), || format!("S_{n} != x"))?;
    }
    ensure(!is_degenerate(&s).unwrap(), || "stabilization example is degenerate".into())?;
    Ok(format!("{entries} entries ({non_normal} non-normal), stabilization example ok"))
}

fn criterion_8() -> Outcome {
    let v = lerch_phi(Complex64::new(0.5, 0.0), 1, Complex64::new(1.0, 0.0)).map_err(|e| e.to_string())?;
    ensure((v.re - 2.0 * std::f64::consts::LN_2).abs() < 1e-12 && v.im.abs() < 1e-12, || format!("Phi = {v}"))?;
    let mut worst: f64 = 0.0;
    for t in [Complex64::new(0.5, 0.0), Complex64::new(-0.7, 0.0), Complex64::new(0.3, 0.4)] {
        for n in 1..=3u32 {
            for k in 0..100 {
                let x = Complex64::new(-3.7 + 0.093 * k as f64, 0.15 + 0.1 * (k % 4) as f64);
                let a = lerch_phi(t, n, x).map_err(|e| e.to_string())?;
                let b = lerch_phi(t, n, x + 1.0).map_err(|e| e.to_string())?;
                let c = x.powi(-(n as i32));
                let rel = (a - t * b - c).norm() / (a.norm() + (t * b).norm() + c.norm());
                worst = worst.max(rel);
            }
        }
    }
    ensure(worst < 1e-10, || format!("recursion relative residual {worst:e}"))?;
    let spec = TraceSpec::new(fp("x*(x-1)"), q("1/2"), DensePolynomial::one()).unwrap();
    let samples: Vec<_> = (0..20).map(|k| Complex64::new(2.05 + 0.2 * k as f64, 0.25 * (k % 5) as f64 - 0.5)).collect();
    let r = verify_lerch_recursion(&spec, &samples).map_err(|e| e.to_string())?;
    ensure(r.max_residual < 1e-9, || format!("difference-equation residual {:e}", r.max_residual))?;
    Ok(format!("grid residual {worst:.1e}, difference equation {:.1e}", r.max_residual))
}

fn criterion_9() -> Outcome {
    let mut rng = catalog::rng(SEED + 9);
    let p = fp("x^2*(x-1)^2");
    let mut pieces = 0;
    for t in catalog::twists() {
        for _ in 0..5 {
            let s = TraceSpec::new(p.clone(), t.clone(), random_q(&mut rng, &p, &t)).unwrap();
            let parts = lift(decompose_pole_order(&s), || format!("t = {t}"))?;
            let mut sum = TruncatedSeries::zero(40);
            for (_, c) in &parts {
                sum = sum.add(&solve_moments(c, 40).unwrap());
                pieces += 1;
            }
            ensure(sum == solve_moments(&s, 40).unwrap(), || format!("pole-order split, t = {t}"))?;
        }
    }
    let p = fp("x*(x-1)*(x-2)");
    for t in catalog::twists() {
        let basis = degenerate_basis(&p, &t).unwrap();
        let mut specs = basis.clone();
        specs.extend((0..3).filter_map(|_| random_degenerate(&mut rng, &basis)));
        for s in &specs {
            let parts = lift(decompose_two_root(s), || format!("t = {t}"))?;
            let mut sum = TruncatedSeries::zero(40);
            for (p2, c) in &parts {
                let roots = p2.roots();
                ensure(roots.len() == 2 && (&roots[1].0 - &roots[0].0).as_integer().is_some(), || {
                    format!("factor {p2:?} is not a two-root polynomial at integer distance")
                })?;
                sum = sum.add(&solve_moments(c, 40).unwrap());
                pieces += 1;
            }
            ensure(sum == solve_moments(s, 40).unwrap(), || format!("two-root split, t = {t}, Q = {}", s.q()))?;
        }
    }
    Ok(format!("{pieces} components recombine exactly"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("dimension formulas", criterion_1),
        ("twisted-trace identity", criterion_2),
        ("tri-oracle degeneracy agreement", criterion_3),
        ("rational reconstruction round trip", criterion_4),
        ("worked exact values", criterion_5),
        ("module traces", criterion_6),
        ("Pade functional bound", criterion_7),
        ("Lerch numerics", criterion_8),
        ("decompositions", criterion_9),
    ];
    let start = Instant::now();
    let results: Vec<(Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                scope.spawn(move || {
                    let t0 = Instant::now();
                    let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (out, t0.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (out, secs))) in criteria.iter().zip(results).enumerate() {
        match out {
            Ok(detail) => println!("[PASS] criterion {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
