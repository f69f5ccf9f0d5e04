//! Command-line front end: `eval`, `check`, `suite` and `list`.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 not converged,
//! 3 domain error, 4 identity failure, 5 unverifiable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::QError;
use crate::humbert::{self, HumbertKind, HumbertParams};
use crate::identities::{self, IdentityKind, LimitRule, SamplePoint, Status, SuiteOptions, Tolerances};
use crate::qcore::{self, EvalResult, QContext, SeriesConfig};
use crate::series;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_FAIL: i32 = 4;
pub const EXIT_UNVERIFIABLE: i32 = 5;

/// Environment variable consulted for the series tolerance when `--tol` is absent.
pub const TOL_ENV: &str = "QHUMBERT_TOL";

#[derive(Debug, Parser)]
#[command(name = "qhumbert", version, about = "Basic Humbert functions and an identity audit")]
struct Cli {
    /// Series truncation tolerance (overrides QHUMBERT_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Residual tolerance for algebraic, operator and recursion checks.
    #[arg(long, global = true)]
    check_tol: Option<f64>,
    /// Accept numeric parameters as "re,im" pairs.
    #[arg(long, global = true)]
    complex: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a function at a point.
    Eval(EvalArgs),
    /// Check one identity at a point.
    Check(CheckArgs),
    /// Check identities over seeded sample points and write a report.
    Suite(SuiteArgs),
    /// List the identity catalog.
    List(ListArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Function {
    Phi1,
    Phi2,
    Phi3,
    Qgamma,
    Qbeta,
    Qpochhammer,
    QpochhammerInf,
    Qexp,
    Rphis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value = "0.7", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "1.3", allow_hyphen_values = true)]
    beta: String,
    /// Denominator parameter; for phi3 this is its only lower parameter.
    #[arg(long, default_value = "2.1", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "0.2", allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value = "0.15", allow_hyphen_values = true)]
    y: String,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(value_enum)]
    function: Function,
    #[command(flatten)]
    point: PointArgs,
    /// Base of the shifted factorial `(a;q)_n`.
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    a: String,
    /// Length of the shifted factorial.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Argument of qexp and rphis.
    #[arg(long, default_value = "0.3", allow_hyphen_values = true)]
    z: String,
    /// rphis numerator parameter (repeatable).
    #[arg(long = "numer", allow_hyphen_values = true)]
    numer: Vec<String>,
    /// rphis denominator parameter (repeatable).
    #[arg(long = "denom", allow_hyphen_values = true)]
    denom: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct CheckArgs {
    id: String,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    /// Comma-separated identity ids.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["all", "kind"])]
    ids: Vec<String>,
    /// Every identity in the catalog (the default).
    #[arg(long)]
    all: bool,
    /// Restrict to one identity kind.
    #[arg(long, conflicts_with = "all")]
    kind: Option<String>,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Report destination; without it the report goes to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sample |x|, |y| up to this bound instead of each identity's default.
    #[arg(long)]
    max_xy: Option<f64>,
}

#[derive(Debug, Args)]
struct ListArgs {
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

struct Usage(String);

fn exit_for(err: &QError) -> i32 {
    match err {
        QError::NotConverged(_) => EXIT_NOT_CONVERGED,
        QError::UnknownIdentity(_) => EXIT_USAGE,
        QError::Domain(_)
        | QError::PoleAtNonpositiveInteger(_)
        | QError::ZeroArgument(_)
        | QError::RatioUndefined { .. } => EXIT_DOMAIN,
    }
}

fn parse_number(name: &str, raw: &str, complex: bool) -> Result<Complex64, Usage> {
    let bad = || Usage(format!("invalid value {raw:?} for --{name}"));
    let real = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let v = if complex {
        match raw.split_once(',') {
            Some((re, im)) => Complex64::new(real(re)?, real(im)?),
            None => Complex64::new(real(raw)?, 0.0),
        }
    } else {
        if raw.contains(',') {
            return Err(Usage(format!("--{name} {raw:?}: complex values need --complex")));
        }
        Complex64::new(real(raw)?, 0.0)
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(bad());
    }
    Ok(v)
}

fn parse_kind(raw: &str) -> Result<IdentityKind, Usage> {
    IdentityKind::parse(raw).ok_or_else(|| {
        Usage(format!("unknown kind {raw:?}; expected algebraic, operator, recursion, integral or limit"))
    })
}

struct Point {
    q: Complex64,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    x: Complex64,
    y: Complex64,
}

impl PointArgs {
    fn parse(&self, complex: bool) -> Result<Point, Usage> {
        let p = |name, raw: &String| parse_number(name, raw, complex);
        Ok(Point {
            q: p("q", &self.q)?,
            alpha: p("alpha", &self.alpha)?,
            beta: p("beta", &self.beta)?,
            gamma: p("gamma", &self.gamma)?,
            x: p("x", &self.x)?,
            y: p("y", &self.y)?,
        })
    }
}

fn series_config(cli: &Cli) -> Result<SeriesConfig, Usage> {
    let mut cfg = SeriesConfig::default();
    if let Some(t) = cli.tol {
        cfg.tol = t;
    } else if let Ok(raw) = std::env::var(TOL_ENV) {
        cfg.tol = raw.trim().parse().map_err(|_| Usage(format!("invalid {TOL_ENV} value {raw:?}")))?;
    }
    cfg.validate().map_err(|e| Usage(e.to_string()))?;
    Ok(cfg)
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Usage> {
    let mut tols = Tolerances::default();
    if let Some(t) = cli.check_tol {
        if !(t > 0.0) {
            return Err(Usage("--check-tol must be positive".into()));
        }
        tols.algebraic = t;
    }
    Ok(tols)
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.17e}", z.re)
    } else {
        format!("{:.17e} {} {:.17e}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
    }
}

/// Parses arguments (the first is the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let out = match &cli.cmd {
        Command::Eval(a) => cmd_eval(&cli, a),
        Command::Check(a) => cmd_check(&cli, a),
        Command::Suite(a) => cmd_suite(&cli, a),
        Command::List(a) => cmd_list(a),
    };
    out.unwrap_or_else(|Usage(msg)| {
        eprintln!("error: {msg}");
        EXIT_USAGE
    })
}

fn real_q(q: Complex64) -> Result<f64, Usage> {
    if q.im != 0.0 {
        return Err(Usage("q must be real here".into()));
    }
    Ok(q.re)
}

fn evaluate(cli: &Cli, a: &EvalArgs, cfg: &SeriesConfig) -> Result<Result<EvalResult, QError>, Usage> {
    let p = a.point.parse(cli.complex)?;
    let num = |name, raw: &String| parse_number(name, raw, cli.complex);
    let ctx = match QContext::new(p.q) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    let res = match a.function {
        Function::Phi1 | Function::Phi2 => {
            let kind = if matches!(a.function, Function::Phi1) { HumbertKind::Phi1 } else { HumbertKind::Phi2 };
            HumbertParams::new(ctx, p.alpha, p.beta, p.gamma, cfg)
                .and_then(|hp| humbert::evaluate(kind, &hp, p.x, p.y, cfg))
        }
        Function::Phi3 => HumbertParams::phi3(ctx, p.alpha, p.gamma, cfg)
            .and_then(|hp| humbert::evaluate(HumbertKind::Phi3, &hp, p.x, p.y, cfg)),
        Function::Qgamma => qcore::q_gamma(&ctx, p.alpha, cfg),
        Function::Qbeta => qcore::q_beta(&ctx, p.alpha, p.beta, cfg),
        Function::Qpochhammer => Ok(EvalResult {
            value: qcore::q_pochhammer(&ctx, num("a", &a.a)?, a.n),
            terms_used: a.n,
            tail_estimate: 0.0,
            converged: true,
        }),
        Function::QpochhammerInf => qcore::q_pochhammer_inf(&ctx, num("a", &a.a)?, cfg),
        Function::Qexp => qcore::q_exponential(&ctx, num("z", &a.z)?, cfg),
        Function::Rphis => {
            let numer = a.numer.iter().map(|v| num("numer", v)).collect::<Result<Vec<_>, _>>()?;
            let denom = a.denom.iter().map(|v| num("denom", v)).collect::<Result<Vec<_>, _>>()?;
            series::rphis_plain(&ctx, &numer, &denom, num("z", &a.z)?, cfg)
        }
    };
    Ok(res)
}

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> Result<i32, Usage> {
    let cfg = series_config(cli)?;
    let (result, code, error) = match evaluate(cli, a, &cfg)? {
        Ok(r) => (Some(r), EXIT_OK, None),
        Err(QError::NotConverged(r)) => (Some(r), EXIT_NOT_CONVERGED, Some("series did not converge".to_string())),
        Err(e) => (None, exit_for(&e), Some(e.to_string())),
    };
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                result: Option<EvalResult>,
                #[serde(skip_serializing_if = "Option::is_none")]
                error: Option<&'a str>,
            }
            let out = Out { result, error: error.as_deref() };
            println!("{}", serde_json::to_string_pretty(&out).expect("eval result serializes"));
        }
        Format::Text | Format::Csv => {
            if let Some(r) = result {
                println!("value: {}", fmt_c(r.value));
                println!("terms_used: {}", r.terms_used);
                println!("tail_estimate: {:e}", r.tail_estimate);
                println!("converged: {}", r.converged);
            }
        }
    }
    if let Some(msg) = error {
        eprintln!("error: {msg}");
    }
    Ok(code)
}

fn cmd_check(cli: &Cli, a: &CheckArgs) -> Result<i32, Usage> {
    let cfg = series_config(cli)?;
    let tols = tolerances(cli)?;
    if identities::lookup(&a.id).is_err() {
        eprintln!("error: unknown identity id {:?}; valid ids:", a.id);
        for id in identities::ids() {
            eprintln!("  {id}");
        }
        return Ok(EXIT_USAGE);
    }
    let p = a.point.parse(cli.complex)?;
    let point = SamplePoint {
        q: real_q(p.q)?,
        alpha: p.alpha,
        beta: p.beta,
        gamma: p.gamma,
        x: p.x,
        y: p.y,
        r: a.r,
        s: a.s,
        l: a.l,
    };
    let res = match identities::check(&a.id, &point, &cfg, &tols) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(exit_for(&e));
        }
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&res).expect("check result serializes")),
        Format::Text | Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "id: {}", res.id);
            let _ = writeln!(s, "lhs: {}", fmt_c(res.lhs_value));
            let _ = writeln!(s, "rhs: {}", fmt_c(res.rhs_value));
            let _ = writeln!(s, "abs_residual: {:e}", res.abs_residual);
            let _ = writeln!(s, "rel_residual: {:e}", res.rel_residual);
            let _ = writeln!(s, "tolerance: {:e}", res.tolerance);
            let _ = writeln!(s, "status: {}", res.status.as_str());
            if let Some(d) = &res.detail {
                let _ = writeln!(s, "detail: {d}");
            }
            let along = match identities::lookup(&a.id).ok().and_then(|spec| spec.limit) {
                Some(LimitRule::Unverifiable) => "beta",
                _ => "q",
            };
            for (v, err) in &res.sequence {
                let _ = writeln!(s, "  {along} = {v}: {err:e}");
            }
            for f in &res.other_forms {
                let _ = writeln!(
                    s,
                    "form {} ({}): rel_residual {:e}, {}",
                    f.label,
                    f.role.as_str(),
                    f.rel_residual,
                    f.status.as_str()
                );
            }
            print!("{s}");
        }
    }
    Ok(match res.status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::NotConverged => EXIT_NOT_CONVERGED,
        Status::Unverifiable => EXIT_UNVERIFIABLE,
    })
}

fn cmd_suite(cli: &Cli, a: &SuiteArgs) -> Result<i32, Usage> {
    let cfg = series_config(cli)?;
    let tols = tolerances(cli)?;
    let ids: Vec<&str> = if !a.ids.is_empty() {
        let mut ids = Vec::new();
        for raw in &a.ids {
            let spec = identities::lookup(raw.trim()).map_err(|e| Usage(e.to_string()))?;
            ids.push(spec.id);
        }
        ids
    } else if let Some(k) = &a.kind {
        let kind = parse_kind(k)?;
        identities::registry().iter().filter(|s| s.kind == kind).map(|s| s.id).collect()
    } else {
        identities::ids()
    };
    let opts = SuiteOptions { count: a.count, seed: a.seed, xy_max: a.max_xy };
    let report = identities::run_suite(&ids, &opts, &cfg, &tols).map_err(|e| Usage(e.to_string()))?;
    let body = match a.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    match &a.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return Ok(EXIT_USAGE);
            }
            print!("{}", report.to_text());
        }
        None => print!("{body}"),
    }
    Ok(if report.all_resolved() { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_list(a: &ListArgs) -> Result<i32, Usage> {
    let kind = a.kind.as_deref().map(parse_kind).transpose()?;
    let specs: Vec<_> = identities::registry().iter().filter(|s| kind.is_none_or(|k| s.kind == k)).collect();
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                id: &'static str,
                paper_equation: String,
                kind: IdentityKind,
                title: &'static str,
                domain: String,
            }
            let entries: Vec<Entry> = specs
                .iter()
                .map(|s| Entry {
                    id: s.id,
                    paper_equation: s.equation_label(),
                    kind: s.kind,
                    title: s.title,
                    domain: s.domain.describe(),
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&entries).expect("catalog serializes"));
        }
        Format::Csv => {
            println!("id,paper_equation,kind,domain");
            for s in specs {
                println!("{},\"{}\",{},\"{}\"", s.id, s.equation_label(), s.kind.as_str(), s.domain.describe());
            }
        }
        Format::Text => {
            for s in specs {
                println!("{:<10} {:<28} {:<10} {}", s.id, s.equation_label(), s.kind.as_str(), s.domain.describe());
            }
        }
    }
    Ok(EXIT_OK)
}
