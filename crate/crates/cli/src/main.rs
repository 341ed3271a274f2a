//! `cycint`: cycle integrals, identity suites and class tables.
//!
//! Exit codes: 0 success, 1 an identity failed its tolerance, 2 invalid
//! input, 3 numerical non-convergence.

mod config;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cycle_integrals::bqf::{enumerate_classes, log_fundamental_unit, QuadForm};
use cycle_integrals::cycle::{cycle_integral, normalized_frame};
use cycle_integrals::forms::{FamilyParams, FamilySpec};
use cycle_integrals::verify::{run_suite, ReportRow, SuiteConfig, QUAD_TOL};
use cycle_integrals::Error;
use report::Format;
use serde::Serialize;

/// Largest accepted q-expansion truncation.
const MAX_M: usize = 400;
/// Largest accepted lattice truncation.
const MAX_N: usize = 1600;

#[derive(Parser)]
#[command(name = "cycint", version, about = "Cycle integrals of modular objects along closed geodesics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one cycle integral C(F, Q).
    Integral(IntegralArgs),
    /// Run an identity suite and write a report.
    Verify(VerifyArgs),
    /// List one form per class of a discriminant with its fundamental unit.
    Classes(ClassesArgs),
}

#[derive(Args)]
struct IntegralArgs {
    /// Quadratic form as `a,b,c`.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "d", conflicts_with = "d")]
    form: Option<String>,
    /// Discriminant; uses the first class representative.
    #[arg(long = "D", allow_negative_numbers = true)]
    d: Option<i64>,
    /// const[:c], productGH, e2star, eisenstein[:s], harmonic[:k], holomorphic[:w], raw:a:w
    #[arg(long, default_value = "const")]
    family: String,
    /// Operators applied to the family, in order (L, R, xi, Delta, D^n).
    #[arg(long = "op")]
    ops: Vec<String>,
    /// Parameter s of `eisenstein`.
    #[arg(long)]
    s: Option<f64>,
    /// Parameter k of `harmonic` (weight of `holomorphic`).
    #[arg(long)]
    k: Option<i64>,
    /// q-expansion terms per factor.
    #[arg(long = "M", default_value_t = 40)]
    m: usize,
    /// Lattice truncation; chosen by doubling when absent.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Target change for the lattice doubling.
    #[arg(long, default_value_t = 1e-9)]
    qtol: f64,
    /// Relative quadrature tolerance.
    #[arg(long = "quad-tol", default_value_t = QUAD_TOL)]
    quad_tol: f64,
    /// Write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// default, theorem, recursion, harmonic, or '' for the empty suite.
    #[arg(long)]
    suite: Option<String>,
    /// Identity tolerance replacing the per-family defaults.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// key=value file mirroring these flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for suite jobs.
    #[arg(long)]
    threads: Option<usize>,
    /// Run every job at these discriminants (comma separated).
    #[arg(long = "D", value_delimiter = ',', allow_negative_numbers = true)]
    d: Vec<i64>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    qtol: Option<f64>,
    #[arg(long = "quad-tol")]
    quad_tol: Option<f64>,
}

#[derive(Args)]
struct ClassesArgs {
    #[arg(long = "D", allow_negative_numbers = true)]
    d: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Success = 0,
    IdentityFailed = 1,
    InvalidInput = 2,
    Numeric = 3,
}

impl From<&Error> for Exit {
    fn from(e: &Error) -> Self {
        if e.is_numeric() {
            Exit::Numeric
        } else {
            Exit::InvalidInput
        }
    }
}

fn fail(code: Exit, msg: impl std::fmt::Display) -> Exit {
    eprintln!("error: {msg}");
    code
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name} must be positive, got {v}"))
    }
}

fn params(m: usize, n: Option<usize>, qtol: f64) -> Result<FamilyParams, String> {
    if !(1..=MAX_M).contains(&m) {
        return Err(format!("M must lie in 1..={MAX_M}, got {m}"));
    }
    if let Some(n) = n {
        if !(1..=MAX_N).contains(&n) {
            return Err(format!("N must lie in 1..={MAX_N}, got {n}"));
        }
    }
    Ok(FamilyParams { m, n, qtol: positive("qtol", qtol)? })
}

fn family_spec(args: &IntegralArgs) -> Result<FamilySpec, String> {
    let mut family = args.family.clone();
    match (family.as_str(), args.s, args.k) {
        ("eisenstein", Some(s), _) => family = format!("eisenstein:{s}"),
        ("harmonic", _, Some(k)) => family = format!("harmonic:{k}"),
        ("holomorphic", _, Some(k)) => family = format!("holomorphic:{k}"),
        _ => {}
    }
    let ops: Vec<&str> = args.ops.iter().flat_map(|o| o.split('|')).filter(|o| !o.is_empty()).collect();
    let text = std::iter::once(family.as_str()).chain(ops).collect::<Vec<_>>().join("|");
    text.parse().map_err(|e: Error| e.to_string())
}

#[derive(Serialize)]
struct IntegralRow {
    form: String,
    #[serde(rename = "D")]
    d: i64,
    family: String,
    weight: i64,
    value_re: f64,
    value_im: f64,
    abs_error: f64,
    panels: usize,
    epsilon_sq: f64,
}

fn cmd_integral(args: IntegralArgs) -> Exit {
    let prepared = (|| -> Result<_, String> {
        let spec = family_spec(&args)?;
        let p = params(args.m, args.n, args.qtol)?;
        let quad_tol = positive("quad-tol", args.quad_tol)?;
        Ok((spec, p, quad_tol))
    })();
    let (spec, p, quad_tol) = match prepared {
        Ok(v) => v,
        Err(msg) => return fail(Exit::InvalidInput, msg),
    };
    let q = match (&args.form, args.d) {
        (Some(text), _) => match QuadForm::from_str(text) {
            Ok(q) => q,
            Err(e) => return fail(Exit::from(&e), e),
        },
        (None, Some(d)) => match enumerate_classes(d) {
            Ok(reps) if !reps.is_empty() => reps[0],
            Ok(_) => return fail(Exit::InvalidInput, format!("no integral forms of discriminant {d}")),
            Err(e) => return fail(Exit::from(&e), e),
        },
        (None, None) => return fail(Exit::InvalidInput, "either --form or --D is required"),
    };
    let result = q
        .check_admissible()
        .and_then(|_| spec.build(&p))
        .and_then(|f| cycle_integral(&f, &q, quad_tol).map(|r| (f.weight(), r)));
    let (weight, r) = match result {
        Ok(v) => v,
        Err(e) => return fail(Exit::from(&e), e),
    };
    println!("C(F, Q) = {} {} {}i", r.value.re, if r.value.im < 0.0 { '-' } else { '+' }, r.value.im.abs());
    println!(
        "  form {q}  D = {}  family {spec}  weight {weight}  abs_error {:.3e}  panels {}  eps^2 {}",
        q.discriminant(),
        r.abs_error,
        r.panels,
        r.epsilon_sq
    );
    if let Some(out) = &args.out {
        let row = IntegralRow {
            form: q.to_string(),
            d: q.discriminant(),
            family: spec.to_string(),
            weight,
            value_re: r.value.re,
            value_im: r.value.im,
            abs_error: r.abs_error,
            panels: r.panels,
            epsilon_sq: r.epsilon_sq,
        };
        if let Err(msg) = report::write_json(out, &row) {
            return fail(Exit::InvalidInput, msg);
        }
    }
    Exit::Success
}

struct VerifySettings {
    suite: String,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Format,
    threads: Option<usize>,
    discriminants: Vec<i64>,
    params: FamilyParams,
    quad_tol: f64,
}

fn verify_settings(args: VerifyArgs) -> Result<VerifySettings, String> {
    let file = match &args.config {
        Some(path) => config::load(path)?,
        None => BTreeMap::new(),
    };
    fn from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, String> {
        file.get(key)
            .map(|v| v.parse::<T>().map_err(|_| format!("config: invalid value `{v}` for `{key}`")))
            .transpose()
    }
    let suite = args.suite.or(from_file(&file, "suite")?).unwrap_or_else(|| "default".into());
    let tol = match args.tol.or(from_file(&file, "tol")?) {
        Some(t) => Some(positive("tol", t)?),
        None => None,
    };
    let out = args.out.or(from_file(&file, "out")?);
    let format = match args.format {
        Some(f) => f,
        None => from_file::<Format>(&file, "format")?.unwrap_or(Format::Json),
    };
    let threads = args.threads.or(from_file(&file, "threads")?);
    if threads == Some(0) {
        return Err("threads must be at least 1".into());
    }
    let discriminants = if !args.d.is_empty() {
        args.d
    } else if let Some(v) = file.get("D") {
        v.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| format!("config: invalid discriminant `{x}`")))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    let defaults = FamilyParams::default();
    let params = params(
        args.m.or(from_file(&file, "M")?).unwrap_or(defaults.m),
        args.n.or(from_file(&file, "N")?),
        args.qtol.or(from_file(&file, "qtol")?).unwrap_or(defaults.qtol),
    )?;
    let quad_tol = positive("quad-tol", args.quad_tol.or(from_file(&file, "quad-tol")?).unwrap_or(QUAD_TOL))?;
    Ok(VerifySettings { suite, tol, out, format, threads, discriminants, params, quad_tol })
}

#[derive(Serialize)]
struct Meta<'a> {
    suite: &'a str,
    rows: usize,
    passed: usize,
    failed: usize,
    errors: usize,
    threads: usize,
    wall_time_s: f64,
    row_wall_time_s: Vec<f64>,
    version: &'static str,
}

fn configure_threads(n: Option<usize>) -> Result<usize, String> {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = n {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
        }
        Ok(rayon::current_num_threads())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        Ok(1)
    }
}

fn cmd_verify(args: VerifyArgs) -> Exit {
    let s = match verify_settings(args) {
        Ok(s) => s,
        Err(msg) => return fail(Exit::InvalidInput, msg),
    };
    let mut cfg = match SuiteConfig::named(&s.suite) {
        Ok(c) => c,
        Err(e) => return fail(Exit::InvalidInput, e),
    };
    cfg.params = s.params;
    cfg.quad_tol = s.quad_tol;
    cfg.tol_override = s.tol;
    if !s.discriminants.is_empty() {
        cfg.discriminants = Some(s.discriminants.clone());
    }
    let threads = match configure_threads(s.threads) {
        Ok(t) => t,
        Err(msg) => return fail(Exit::InvalidInput, msg),
    };

    let start = Instant::now();
    let rows = run_suite(&cfg);
    let wall = start.elapsed();
    let table: Vec<ReportRow> = rows.iter().map(|r| r.to_row()).collect();
    let bytes = match report::render(&table, s.format) {
        Ok(b) => b,
        Err(msg) => return fail(Exit::Numeric, msg),
    };

    let summary = |line: String| {
        if s.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    for (row, t) in rows.iter().zip(&table) {
        let status = match row.error() {
            Some(_) => "ERROR",
            None if t.pass => "PASS",
            None => "FAIL",
        };
        let rel = t.rel_residual.map(|r| format!("{r:.2e}")).unwrap_or_else(|| "-".into());
        summary(format!("{status:5} {:24} {:16} {:10} rel {rel}", t.identity, t.family, t.form));
    }
    let passed = rows.iter().filter(|r| r.passed()).count();
    let errors: Vec<&Error> = rows.iter().filter_map(|r| r.error()).collect();
    summary(format!(
        "{} rows: {passed} passed, {} failed, {} errors ({:.2}s)",
        rows.len(),
        rows.len() - passed - errors.len(),
        errors.len(),
        wall.as_secs_f64()
    ));

    match &s.out {
        Some(out) => {
            let meta = Meta {
                suite: &s.suite,
                rows: rows.len(),
                passed,
                failed: rows.len() - passed - errors.len(),
                errors: errors.len(),
                threads,
                wall_time_s: wall.as_secs_f64(),
                row_wall_time_s: rows.iter().map(|r| r.wall_time().as_secs_f64()).collect(),
                version: env!("CARGO_PKG_VERSION"),
            };
            if let Err(msg) = report::write(out, &bytes).and_then(|_| report::write_json(&report::meta_path(out), &meta)) {
                return fail(Exit::InvalidInput, msg);
            }
        }
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }

    if errors.iter().any(|e| !e.is_numeric()) {
        Exit::InvalidInput
    } else if !errors.is_empty() {
        Exit::Numeric
    } else if passed < rows.len() {
        Exit::IdentityFailed
    } else {
        Exit::Success
    }
}

#[derive(Serialize)]
struct ClassRow {
    form: String,
    eps: f64,
    log_eps: f64,
    length: f64,
}

fn cmd_classes(args: ClassesArgs) -> Exit {
    let reps = match enumerate_classes(args.d) {
        Ok(r) if r.is_empty() => return fail(Exit::InvalidInput, format!("no integral forms of discriminant {}", args.d)),
        Ok(r) => r,
        Err(e) => return fail(Exit::from(&e), e),
    };
    let mut rows = Vec::new();
    for q in reps {
        let g = q.content();
        let log_eps = match log_fundamental_unit(args.d / (g * g)) {
            Ok(l) => l,
            Err(e) => return fail(Exit::from(&e), e),
        };
        let eps = normalized_frame(&q).map(|f| f.eps).unwrap_or_else(|_| log_eps.exp());
        rows.push(ClassRow { form: q.to_string(), eps, log_eps, length: 2.0 * log_eps });
    }
    if args.json {
        match serde_json::to_string_pretty(&rows) {
            Ok(s) => println!("{s}"),
            Err(e) => return fail(Exit::Numeric, e),
        }
    } else {
        println!("D = {}: {} class{}", args.d, rows.len(), if rows.len() == 1 { "" } else { "es" });
        for r in &rows {
            println!("{:14} eps = {:<22} 2 log eps = {}", r.form, r.eps, r.length);
        }
    }
    Exit::Success
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Integral(a) => cmd_integral(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Classes(a) => cmd_classes(a),
    };
    ExitCode::from(code as u8)
}
