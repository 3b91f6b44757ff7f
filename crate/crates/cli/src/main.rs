use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypersigma::curve::{c_json, CurveParams, C64};
use hypersigma::error::NumericError;
use hypersigma::inversion::{FitTarget, InversionContext, ResidualCheck};
use hypersigma::sigma::SigmaEvaluator;
use hypersigma::symbolic::{
    duplication_p11, extract_leading_a1_b1, kummer_reduce, verify_duplication_tables,
    verify_rational_limit, verify_theorem_ab, CertReport, KummerData, PRelations, PaperTables,
    TheoremForms,
};
use hypersigma::theta::DerivIndex;
use serde_json::{json, Value};

const SCHEMA: &str = "v1";

#[derive(Parser)]
#[command(name = "hypersigma", version, about = "Genus-2 sigma function certification and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Curve JSON: {"lambda4":[re,im], "lambda6":..., "lambda8":..., "lambda10":...}
    #[arg(long, global = true)]
    curve: Option<PathBuf>,
    /// Quadrature tolerance for periods and Abel-Jacobi integrals.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Truncation tolerance of the theta series.
    #[arg(long, global = true, default_value_t = 1e-16)]
    theta_tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact certification of the duplication tables and decompositions.
    VerifySymbolic {
        #[arg(long, hide = true)]
        mutate_table: bool,
    },
    /// Periods, calibration and every numeric identity on one curve.
    VerifyNumeric,
    /// Evaluate one quantity, or dump periods or tables.
    Eval {
        #[arg(value_enum)]
        what: EvalTarget,
        /// Argument `re1,im1,re3,im3`.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        /// Derivative subscript for sigma, e.g. `13`.
        #[arg(long, default_value = "")]
        d: String,
        /// Index pair for p, one of 11, 13, 33.
        #[arg(long, default_value = "11")]
        ij: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalTarget {
    Sigma,
    P,
    F2,
    G2,
    F5,
    G5,
    Periods,
    Tables,
}

enum Failure {
    Numeric(NumericError),
    Usage(String),
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        Failure::Numeric(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Numeric(e) => match e {
                NumericError::CurveSingular { .. } => 2,
                NumericError::Precision { .. }
                | NumericError::Domain(_)
                | NumericError::Path(_)
                | NumericError::Sampling(_) => 3,
                NumericError::Calibration(_) | NumericError::DegenerateRay(..) => 4,
                NumericError::Pole { .. } => 5,
                NumericError::Input(_) | NumericError::UnsupportedOrder(_) => 64,
            },
        }
    }

    fn to_json(&self) -> Value {
        let (kind, extra) = match self {
            Failure::Usage(_) => ("usage", json!({})),
            Failure::Numeric(e) => match e {
                NumericError::CurveSingular { i, j, distance } => {
                    ("curve_singular", json!({"roots": [i, j], "distance": distance}))
                }
                NumericError::Precision { what, target, achieved } => (
                    "precision",
                    json!({"what": what, "target": target, "achieved": achieved}),
                ),
                NumericError::Calibration(_) | NumericError::DegenerateRay(..) => {
                    ("calibration", json!({}))
                }
                NumericError::Pole { what, magnitude } => {
                    ("pole", json!({"what": what, "magnitude": magnitude}))
                }
                NumericError::Domain(_) => ("domain", json!({})),
                NumericError::Path(_) => ("path", json!({})),
                NumericError::Sampling(_) => ("sampling", json!({})),
                NumericError::Input(_) | NumericError::UnsupportedOrder(_) => ("input", json!({})),
            },
        };
        let message = match self {
            Failure::Usage(m) => m.clone(),
            Failure::Numeric(e) => e.to_string(),
        };
        let mut v = json!({"kind": kind, "message": message});
        if let (Value::Object(m), Value::Object(x)) = (&mut v, extra) {
            m.extend(x);
        }
        v
    }
}

struct Report {
    body: Value,
    text: Vec<String>,
    pass: bool,
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn load_curve(cli: &Cli) -> Result<CurveParams, Failure> {
    let path = cli
        .curve
        .as_ref()
        .ok_or_else(|| Failure::Usage("--curve FILE is required for this command".into()))?;
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(CurveParams::from_json(&src)?)
}

fn context(cli: &Cli) -> Result<InversionContext, Failure> {
    let params = load_curve(cli)?;
    let ev = SigmaEvaluator::new(params, cli.tol, cli.theta_tol)?;
    Ok(InversionContext::new(ev, cli.tol)?)
}

fn cert_line(r: &CertReport) -> String {
    let mut s = format!("{}: {}", r.check, if r.pass { "PASS" } else { "FAIL" });
    if let Some(d) = &r.detail {
        s += &format!(" ({d})");
    }
    if let Some(w) = &r.witness {
        s += &format!(" witness {w}");
    }
    s
}

fn verify_symbolic(mutate: bool) -> Report {
    let tables = if mutate {
        PaperTables::printed().with_a0030_mutated()
    } else {
        PaperTables::printed()
    };
    let start = std::time::Instant::now();
    let dup = match duplication_p11(&PRelations::printed()) {
        Ok(f) => verify_duplication_tables(&kummer_reduce(&f, &KummerData::printed()), &tables),
        Err(e) => CertReport {
            check: "duplication_tables".into(),
            pass: false,
            witness: None,
            elapsed_ms: 0.0,
            detail: Some(e.to_string()),
        },
    };
    let theorem = verify_theorem_ab(&tables);
    let t0 = std::time::Instant::now();
    let leading = extract_leading_a1_b1(&TheoremForms::printed(), &tables);
    let leading = CertReport {
        check: "leading_a1_b1".into(),
        pass: leading.is_ok(),
        witness: None,
        elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
        detail: leading.err().map(|e| e.to_string()),
    };
    let limit = verify_rational_limit();
    let reports = [dup, theorem, leading, limit];
    let pass = reports.iter().all(|r| r.pass);
    Report {
        body: json!({
            "reports": reports,
            "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
        }),
        text: reports.iter().map(cert_line).collect(),
        pass,
    }
}

fn check_line(c: &ResidualCheck) -> String {
    format!(
        "{}: {} (max residual {:.3e} over {} samples)",
        c.name,
        if c.pass { "PASS" } else { "FAIL" },
        c.max_residual,
        c.samples
    )
}

fn verify_numeric(cli: &Cli) -> Result<Report, Failure> {
    let ctx = context(cli)?;
    let ev = &ctx.ev;
    let seed = cli.seed;
    let samples = ctx.generic_samples(20, seed)?;
    let mut checks = Vec::new();

    let mut quasi = Vec::new();
    for u in &samples[..3] {
        for i in -2..=2 {
            for j in -2..=2 {
                quasi.push(ev.quasiperiod_residual(*u, [i, j], [-j, i])?);
            }
        }
    }
    checks.push(ResidualCheck::new("quasi_periodicity", &quasi, 1e-9));
    checks.push(ctx.vanishing_suite(20, seed.wrapping_add(1))?);
    checks.extend(ctx.inversion_suite(20, seed.wrapping_add(2))?);
    checks.extend(ctx.check_decompositions(&samples)?);
    let tie: Vec<f64> = samples[..10]
        .iter()
        .map(|u| ctx.duplication_residual(*u))
        .collect::<Result<_, _>>()?;
    checks.push(ResidualCheck::new("duplication_tie", &tie, 1e-8));

    let zero = [C64::new(0.0, 0.0); 2];
    let j = ev.jet(zero)?;
    let origin = [j.value(), j.d("1"), j.d("11"), j.d("3") + 1.0].map(|z| z.norm());
    checks.push(ResidualCheck::new("sigma_at_origin", &origin, 1e-9));
    checks.push(ResidualCheck::new("h_at_origin", &[(ctx.h(zero)? - 2.0).norm()], 1e-9));

    let mut fits = serde_json::Map::new();
    for which in [FitTarget::F2Combo, FitTarget::F5Combo, FitTarget::A1, FitTarget::B1] {
        let got = ctx.leading_coefficient_fit(which)?;
        let err: Vec<f64> = got
            .iter()
            .zip(which.expected())
            .map(|(g, e)| (g - e).abs())
            .collect();
        let name = serde_json::to_value(which).unwrap();
        let name = name.as_str().unwrap_or("fit");
        let tol = if which == FitTarget::B1 { 1e-6 } else { 1e-4 };
        checks.push(ResidualCheck::new(&format!("fit_{name}"), &err, tol));
        fits.insert(name.to_string(), json!(got));
    }

    let pass = checks.iter().all(|c| c.pass);
    let mut text = vec![format!(
        "C = {:.12} {:+.12}i, basis search steps {}",
        ev.c.re, ev.c.im, ev.basis_search_steps
    )];
    text.extend(checks.iter().map(check_line));
    Ok(Report {
        body: json!({
            "curve": ev.curve.params,
            "C": c_json(ev.c),
            "basis_search_steps": ev.basis_search_steps,
            "legendre_residual": ev.periods.legendre_residual,
            "checks": checks,
            "fits": fits,
        }),
        text,
        pass,
    })
}

fn parse_u(s: Option<&str>) -> Result<[C64; 2], Failure> {
    let s = s.ok_or_else(|| Failure::Usage("--u re1,im1,re3,im3 is required".into()))?;
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("bad --u: {e}")))?;
    if v.len() != 4 {
        return Err(Failure::Usage("--u needs four numbers".into()));
    }
    Ok([C64::new(v[0], v[1]), C64::new(v[2], v[3])])
}

fn eval(cli: &Cli, what: EvalTarget, u: Option<&str>, d: &str, ij: &str) -> Result<Report, Failure> {
    if what == EvalTarget::Tables {
        return Ok(Report {
            body: json!({"tables": PaperTables::printed().to_json()}),
            text: vec![serde_json::to_string_pretty(&PaperTables::printed().to_json()).unwrap()],
            pass: true,
        });
    }
    let ctx = context(cli)?;
    if what == EvalTarget::Periods {
        let v = ctx.ev.to_json();
        return Ok(Report {
            text: vec![serde_json::to_string_pretty(&v).unwrap()],
            body: json!({"evaluator": v}),
            pass: true,
        });
    }
    let u = parse_u(u)?;
    let (name, value) = match what {
        EvalTarget::Sigma => (
            format!("sigma{d}"),
            ctx.ev.eval(u, DerivIndex::from_subscript(d)?)?,
        ),
        EvalTarget::P => {
            if !["11", "13", "33"].contains(&ij) {
                return Err(Failure::Usage(format!("--ij must be 11, 13 or 33, not {ij}")));
            }
            let j = ctx.ev.jet(u)?;
            if j.value().norm() < hypersigma::inversion::POLE_GUARD * j.scale {
                return Err(NumericError::Pole {
                    what: format!("p{ij}"),
                    magnitude: j.value().norm(),
                }
                .into());
            }
            (format!("p{ij}"), j.p(ij))
        }
        EvalTarget::F2 => ("f2".into(), ctx.f2(u)?),
        EvalTarget::G2 => ("g2".into(), ctx.g2(u)?),
        EvalTarget::F5 => ("f5".into(), ctx.f5(u)?),
        EvalTarget::G5 => ("g5".into(), ctx.g5(u)?),
        EvalTarget::Periods | EvalTarget::Tables => unreachable!(),
    };
    Ok(Report {
        text: vec![format!("{name}({u:?}) = {value}")],
        body: json!({
            "quantity": name,
            "u": [c_json(u[0]), c_json(u[1])],
            "value": c_json(value),
        }),
        pass: true,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifySymbolic { .. } => "verify-symbolic",
        Command::VerifyNumeric => "verify-numeric",
        Command::Eval { .. } => "eval",
    }
}

fn emit(cli: &Cli, content: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> u8 {
    if !(cli.tol > 0.0) || !(cli.theta_tol > 0.0) {
        let f = Failure::Usage("--tol and --theta-tol must be positive".into());
        eprintln!("error: {}", f.to_json()["message"]);
        return f.code();
    }
    let result = match &cli.command {
        Command::VerifySymbolic { mutate_table } => Ok(verify_symbolic(*mutate_table)),
        Command::VerifyNumeric => verify_numeric(cli),
        Command::Eval { what, u, d, ij } => eval(cli, *what, u.as_deref(), d, ij),
    };
    let name = command_name(&cli.command);
    let (mut body, text, code) = match result {
        Ok(r) => {
            let mut body = json!({"pass": r.pass});
            if let (Value::Object(m), Value::Object(x)) = (&mut body, r.body) {
                m.extend(x);
            }
            (body, r.text, if r.pass { 0 } else { 1 })
        }
        Err(f) => {
            let line = format!("error ({}): {}", f.to_json()["kind"], f.to_json()["message"]);
            (json!({"pass": false, "error": f.to_json()}), vec![line], f.code())
        }
    };
    if let Value::Object(m) = &mut body {
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(name));
    }
    if !cli.timing {
        strip_timing(&mut body);
    }
    let content = match cli.format {
        Format::Json => serde_json::to_string_pretty(&body).unwrap() + "\n",
        Format::Text => {
            let status = if code == 0 { "PASS" } else { "FAIL" };
            let mut lines = vec![format!("{name}: {status}")];
            lines.extend(text);
            lines.join("\n") + "\n"
        }
    };
    match emit(cli, &content) {
        Ok(()) => code,
        Err(f) => {
            eprintln!("error: {}", f.to_json()["message"]);
            f.code()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(&cli))
}
