//! `twisted-traces` command line. Every command prints one JSON document on
//! stdout. Exit status: 0 success, 1 falsified invariant, 2 bad input.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use twisted_traces::catalog::DEFAULT_SEED;
use twisted_traces::degeneracy::{
    decompose_pole_order, decompose_two_root, degenerate_basis, delta_criterion, delta_invariant, reconstruct_rational,
};
use twisted_traces::findim::{build_jordan_module, build_string_module, check_relations, check_twisting, module_trace};
use twisted_traces::lerch::verify_lerch_recursion;
use twisted_traces::pade::{degeneracy_profile, pade_approximant, verify_pade_functional};
use twisted_traces::selftest::run_selftest;
use twisted_traces::tracespace::{solve_moments, trace_dim, TraceSpec};
use twisted_traces::{DensePolynomial, Error, FactoredPolynomial, GaussianRational};

#[derive(Parser)]
#[command(name = "twisted-traces", version, about = "Twisted traces on quantized type-A Kleinian singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of the trace space and of its degenerate subspace.
    Dims(Flags),
    /// Moments T(z^0) … T(z^n).
    Moments(Flags),
    /// The Δ-criterion report.
    CheckDegenerate(Flags),
    /// A basis of the degenerate traces, as Q polynomials.
    DegenerateBasis(Flags),
    /// The rational Stieltjes transform of a degenerate trace.
    Reconstruct(Flags),
    /// Split a trace by pole order or into two-root pieces.
    Decompose(Flags),
    /// The n-th Padé approximant and the residual of its difference equation.
    Pade(Flags),
    /// The n-degeneracy profile for n = 0..=n.
    Profile(Flags),
    /// Build a string or Jordan module and its trace.
    Findim(Flags),
    /// Numerically verify the Lerch solution of the difference equation.
    LerchCheck(Flags),
    /// Seeded consistency sweep over the catalog.
    Selftest(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Defining polynomial in factored form, e.g. "x*(x-1)".
    #[arg(long = "P")]
    p: Option<String>,
    /// Twisting parameter, e.g. 2/1 or 1/3+1/2i.
    #[arg(long = "t", allow_hyphen_values = true)]
    t: Option<String>,
    /// Trace parameter Q, e.g. "-x-1".
    #[arg(long = "Q", allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long = "n")]
    n: Option<usize>,
    /// JSON file with the same fields; "-" reads stdin. Flags take precedence.
    #[arg(long)]
    json: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Root at which the module is based.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// String length (string module).
    #[arg(long)]
    j: Option<usize>,
    /// Jordan block size.
    #[arg(long)]
    k: Option<usize>,
    /// Eigenvalue λ (string) or constant C (Jordan) of the twisting map.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Lerch samples "re,im;re,im;…"; defaults to 20 points with Re x in [2, 6].
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    PoleOrder,
    TwoRoot,
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    String,
    Jordan,
}

/// Validated parameters: flags overlaid on the optional JSON file.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(rename = "P")]
    p: Option<FactoredPolynomial>,
    t: Option<GaussianRational>,
    #[serde(rename = "Q")]
    q: Option<DensePolynomial>,
    n: Option<usize>,
    seed: Option<u64>,
    mode: Option<Mode>,
    kind: Option<Kind>,
    a: Option<GaussianRational>,
    j: Option<usize>,
    k: Option<usize>,
    c: Option<GaussianRational>,
    samples: Option<Vec<[f64; 2]>>,
}

enum Failure {
    Usage(String, String),
    Falsified(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(msg) => Failure::Falsified(json!({"error": {"kind": "falsified", "message": msg}})),
            other => Failure::Usage(error_kind(&other).into(), other.to_string()),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::DivisionByZero => "divisionByZero",
        Error::DegreeViolation(_) => "degreeViolation",
        Error::ConstantPolynomial => "constantPolynomial",
        Error::ZeroTwist => "zeroTwist",
        Error::AmbientMismatch => "ambientMismatch",
        Error::NotDivisible(_) => "notDivisible",
        Error::InsufficientMoments { .. } => "insufficientMoments",
        Error::NotDegenerate => "notDegenerate",
        Error::NotARoot(_) => "notARoot",
        Error::RootOrder(_) => "rootOrder",
        Error::PoleProximity(_) => "poleProximity",
        Error::Domain(_) => "domain",
        Error::NotConverged { .. } => "notConverged",
        Error::Invalid(_) => "invalid",
        Error::Falsified(_) => "falsified",
    }
}

type Outcome = Result<Value, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage("usage".into(), msg.into())
}

fn parse_samples(src: &str) -> Result<Vec<[f64; 2]>, Failure> {
    src.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let parts: Vec<_> = pair.split(',').map(|s| s.trim().parse::<f64>()).collect();
            match parts.as_slice() {
                [Ok(re), Ok(im)] => Ok([*re, *im]),
                [Ok(re)] => Ok([*re, 0.0]),
                _ => Err(usage(format!("bad sample {pair:?}; expected re,im"))),
            }
        })
        .collect()
}

fn load_params(flags: &Flags) -> Result<Params, Failure> {
    let mut obj = match &flags.json {
        None => Map::new(),
        Some(path) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
            };
            match serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))? {
                Value::Object(m) => m,
                _ => return Err(usage("the JSON input must be an object")),
            }
        }
    };
    let mut set = |key: &str, v: Value| {
        obj.insert(key.into(), v);
    };
    if let Some(v) = &flags.p {
        set("P", json!(v));
    }
    if let Some(v) = &flags.t {
        set("t", json!(v));
    }
    if let Some(v) = &flags.q {
        set("Q", json!(v));
    }
    if let Some(v) = flags.n {
        set("n", json!(v));
    }
    if let Some(v) = flags.seed {
        set("seed", json!(v));
    }
    if let Some(v) = flags.mode {
        set("mode", json!(match v { Mode::PoleOrder => "pole-order", Mode::TwoRoot => "two-root" }));
    }
    if let Some(v) = flags.kind {
        set("kind", json!(match v { Kind::String => "string", Kind::Jordan => "jordan" }));
    }
    if let Some(v) = &flags.a {
        set("a", json!(v));
    }
    if let Some(v) = flags.j {
        set("j", json!(v));
    }
    if let Some(v) = flags.k {
        set("k", json!(v));
    }
    if let Some(v) = &flags.c {
        set("c", json!(v));
    }
    if let Some(v) = &flags.samples {
        set("samples", json!(parse_samples(v)?));
    }
    serde_json::from_value(Value::Object(obj)).map_err(|e| Failure::Usage("validation".into(), e.to_string()))
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| usage(format!("missing required parameter {name}")))
}

impl Params {
    fn pt(&self) -> Result<(FactoredPolynomial, GaussianRational), Failure> {
        Ok((need(&self.p, "--P")?, need(&self.t, "--t")?))
    }

    fn spec(&self) -> Result<TraceSpec, Failure> {
        let (p, t) = self.pt()?;
        Ok(TraceSpec::new(p, t, need(&self.q, "--Q")?)?)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn run(command: &Command) -> Outcome {
    let (Command::Dims(f)
    | Command::Moments(f)
    | Command::CheckDegenerate(f)
    | Command::DegenerateBasis(f)
    | Command::Reconstruct(f)
    | Command::Decompose(f)
    | Command::Pade(f)
    | Command::Profile(f)
    | Command::Findim(f)
    | Command::LerchCheck(f)
    | Command::Selftest(f)) = command;
    let params = load_params(f)?;
    match command {
        Command::Dims(_) => {
            let (p, t) = params.pt()?;
            let dim_c = trace_dim(&p, &t)?;
            let dim_d = degenerate_basis(&p, &t)?.len();
            let delta = delta_invariant(&p).0;
            if dim_d != delta {
                return Err(Error::Falsified(format!("degenerate basis has {dim_d} elements but delta = {delta}")).into());
            }
            Ok(json!({"dimC": dim_c, "dimD": dim_d, "delta": delta}))
        }
        Command::Moments(_) => {
            let spec = params.spec()?;
            Ok(json!({"moments": to_value(&solve_moments(&spec, need(&params.n, "--n")?)?)}))
        }
        Command::CheckDegenerate(_) => Ok(to_value(&delta_criterion(&params.spec()?)?)),
        Command::DegenerateBasis(_) => {
            let (p, t) = params.pt()?;
            let basis: Vec<_> = degenerate_basis(&p, &t)?.iter().map(|s| to_value(s.q())).collect();
            Ok(json!({"basis": basis}))
        }
        Command::Reconstruct(_) => Ok(to_value(&reconstruct_rational(&params.spec()?)?)),
        Command::Decompose(_) => {
            let spec = params.spec()?;
            let parts: Vec<Value> = match params.mode.unwrap_or(Mode::PoleOrder) {
                Mode::PoleOrder => decompose_pole_order(&spec)?
                    .into_iter()
                    .map(|(k, s)| json!({"order": k, "trace": to_value(&s)}))
                    .collect(),
                Mode::TwoRoot => decompose_two_root(&spec)?.into_iter().map(|(_, s)| json!({"trace": to_value(&s)})).collect(),
            };
            Ok(json!({"components": parts}))
        }
        Command::Pade(_) => {
            let spec = params.spec()?;
            let n = need(&params.n, "--n")?;
            let moments = solve_moments(&spec, 2 * n.max(1) - 1)?;
            let approx = pade_approximant(&moments, n)?;
            let residual = verify_pade_functional(&spec, n)?;
            let mut out = to_value(&approx);
            out["residual"] = to_value(&residual);
            out["residual"]["meetsBound"] = json!(residual.meets_bound());
            Ok(out)
        }
        Command::Profile(_) => {
            let spec = params.spec()?;
            Ok(json!({"profile": to_value(&degeneracy_profile(&spec, need(&params.n, "--n")?)?)}))
        }
        Command::Findim(_) => findim(&params),
        Command::LerchCheck(_) => {
            let spec = params.spec()?;
            let samples: Vec<Complex64> = match &params.samples {
                Some(s) => s.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
                None => (0..20).map(|k| Complex64::new(2.05 + 0.2 * k as f64, 0.25 * (k % 5) as f64 - 0.5)).collect(),
            };
            Ok(to_value(&verify_lerch_recursion(&spec, &samples)?))
        }
        Command::Selftest(_) => {
            let report = run_selftest(params.seed.unwrap_or(DEFAULT_SEED));
            if report.ok() {
                Ok(to_value(&report))
            } else {
                Err(Failure::Falsified(to_value(&report)))
            }
        }
    }
}

fn findim(params: &Params) -> Outcome {
    let (p, t) = params.pt()?;
    let a = need(&params.a, "--a")?;
    let c = params.c.clone().unwrap_or_else(|| GaussianRational::from(1));
    let order = params.n.unwrap_or(10);
    let (module, twisting) = match params.kind.unwrap_or(Kind::String) {
        Kind::String => {
            let m = build_string_module(&p, &a, need(&params.j, "--j")?, &c, &t)?;
            let tw = check_twisting(&m, &t)?;
            (m, Some(tw))
        }
        Kind::Jordan => {
            let len = need(&params.j, "--j")?;
            (build_jordan_module(&p, &a, len, need(&params.k, "--k")?, &c, &t)?, None)
        }
    };
    let broken = check_relations(&module, &p);
    if !broken.is_empty() || twisting == Some(false) {
        return Err(Failure::Falsified(json!({
            "error": {"kind": "falsified", "message": "module relations fail"},
            "brokenRelations": broken,
            "twisting": twisting,
        })));
    }
    Ok(json!({
        "module": to_value(&module),
        "moments": to_value(&module_trace(&module, order)),
        "twisting": twisting,
    }))
}

/// Writes the result document; a closed stdout is not an error worth a panic.
fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{v}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let rendered = e.render().to_string();
            let msg = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ");
            emit(&json!({"error": {"kind": "usage", "message": msg}}));
            return ExitCode::from(2);
        }
    };
    match run(&cli.command) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Falsified(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(kind, message)) => {
            eprintln!("error: {message}");
            emit(&json!({"error": {"kind": kind, "message": message}}));
            ExitCode::from(2)
        }
    }
}
