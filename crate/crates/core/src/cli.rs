//! Command-line front end. Every command prints one JSON document (or the
//! rendered expansion) on stdout.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad arguments, 3 invalid path
//! or geometry, 4 no convergence.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chen::{EvalConfig, Evaluation};
use crate::error::{Error, Result};
use crate::index::Bounds;
use crate::integrand::{build_integrand, regroup, render};
use crate::monodromy::{check_dsn, check_f_relation, check_trivial, FFamily, MonodromyResult};
use crate::paths::{line_from_origin, DivisorComponent, PathSpec};
use crate::polylog::{continue_eval, series_eval, SERIES_RADIUS};
use crate::sampling::Sampler;
use crate::suites::{self, Suite, SuiteOptions};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_PATH_INVALID: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mpolylog", version, about = "Multiple polylogarithms as iterated path integrals")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate Li_m at a point or at the end of a path from the origin.
    Eval(EvalArgs),
    /// Print the continuation integrand for the given bounds.
    Expand(ExpandArgs),
    /// Run a seeded property suite.
    Check(CheckArgs),
    /// Compare an observed monodromy with its closed form.
    Monodromy(MonodromyArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Key-value file with evaluation settings (`rel_tol = 1e-10`, ...).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    delta_min: Option<f64>,
    #[arg(long)]
    start_offset: Option<f64>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Bounds m_1,...,m_n.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u32>,
    /// Target point; the path is the straight line from the origin.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "path")]
    x: Option<Vec<String>>,
    /// JSON path file starting at the origin.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Also report the distance to the series value at the endpoint.
    #[arg(long)]
    check_series: bool,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExpandFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: ExpandFormat,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// shuffle, composition, inversion, reparameterization, homotopy,
    /// integrability, differential or oracle.
    suite: String,
    /// Bounds; the suite's defaults when omitted.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<u32>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    J0,
    #[value(name = "1j")]
    OneJ,
    Jn,
}

#[derive(Debug, Args)]
struct MonodromyArgs {
    #[arg(long)]
    n: usize,
    /// `Z:j` for {x_j = 0} or `D:i,j` for {x_i...x_j = 1}, 1-based.
    #[arg(long, required_unless_present = "family")]
    component: Option<String>,
    /// Relation family for the F functions instead of a component.
    #[arg(long, value_enum, requires = "j", conflicts_with = "component")]
    family: Option<FamilyArg>,
    #[arg(long)]
    j: Option<usize>,
    /// Base point; a seeded point of the polydisk when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    config: ConfigArgs,
}

/// Parse `a`, `a+bi`, `a-bi`, `bi` or `re:im`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read complex number '{s}'"));
    let num = |v: &str| v.parse::<f64>().map_err(|_| bad());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((re, im)) = t.split_once(':') {
        return Ok(C64::new(num(re)?, num(im)?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |v: &str| match v {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        v => num(v),
    };
    match split {
        Some(k) => Ok(C64::new(num(&body[..k])?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

pub fn parse_point(parts: &[String]) -> Result<Vec<C64>> {
    parts.iter().map(|p| parse_complex(p)).collect()
}

/// Parse `Z:j` or `D:i,j` (1-based) into a component of dimension `n`.
pub fn parse_component(s: &str, n: usize) -> Result<DivisorComponent> {
    let bad = || Error::Parse(format!("component must look like Z:j or D:i,j, got '{s}'"));
    let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
    let nums: Vec<usize> = rest.split(',').map(|v| v.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
    let comp = match (kind.to_ascii_uppercase().as_str(), nums.as_slice()) {
        ("Z", [j]) if *j >= 1 => DivisorComponent::CoordZero(j - 1),
        ("D", [i, j]) if *i >= 1 && i <= j => DivisorComponent::ProductOne(i - 1, j - 1),
        _ => return Err(bad()),
    };
    let fits = match comp {
        DivisorComponent::CoordZero(j) => j < n,
        DivisorComponent::ProductOne(_, j) => j < n,
    };
    if !fits {
        return Err(Error::Precondition(format!("component {comp} does not exist for n = {n}")));
    }
    Ok(comp)
}

/// Read `key = value` lines into an evaluation config. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<EvalConfig> {
    let mut cfg = EvalConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let value = value.trim();
        let float = || value.parse::<f64>().map_err(|_| Error::Parse(format!("line {}: bad number '{value}'", lineno + 1)));
        let int = || value.parse::<usize>().map_err(|_| Error::Parse(format!("line {}: bad integer '{value}'", lineno + 1)));
        match key.trim() {
            "rel_tol" => cfg.rel_tol = float()?,
            "abs_tol" => cfg.abs_tol = float()?,
            "start_offset" => cfg.start_offset = float()?,
            "sing_tol" => cfg.sing_tol = float()?,
            "delta_min" => cfg.delta_min = float()?,
            "initial_steps_per_segment" => cfg.initial_steps_per_segment = int()?,
            "max_refinements" => cfg.max_refinements = int()?,
            "max_steps" => cfg.max_steps = int()?,
            other => return Err(Error::Parse(format!("line {}: unknown key '{other}'", lineno + 1))),
        }
    }
    cfg.check()?;
    Ok(cfg)
}

fn load_config(args: &ConfigArgs) -> Result<EvalConfig> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => EvalConfig::default(),
    };
    if let Some(v) = args.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = args.abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = args.delta_min {
        cfg.delta_min = v;
    }
    if let Some(v) = args.start_offset {
        cfg.start_offset = v;
    }
    cfg.check()?;
    Ok(cfg)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidPath(_) | Error::Geometry(_) | Error::Singular(_) => EXIT_PATH_INVALID,
        Error::NonConvergence(_) => EXIT_NO_CONVERGENCE,
        Error::InvalidBounds(_)
        | Error::BoundsMismatch { .. }
        | Error::ComponentOutOfRange { .. }
        | Error::Precondition(_)
        | Error::OutsideSeriesRegion { .. }
        | Error::Parse(_) => EXIT_BAD_ARGS,
    }
}

/// Output of a command: stdout text and exit status.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn document(command: &str, body: impl Serialize) -> Result<String> {
    let mut v = serde_json::to_value(body).map_err(|e| Error::Parse(e.to_string()))?;
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        map.insert("command".into(), json!(command));
    }
    serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize)]
struct EvalOutput {
    bounds: Vec<u32>,
    endpoint: Vec<C64>,
    value: C64,
    est_error: f64,
    words: usize,
    steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_value: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agreement: Option<f64>,
}

fn cmd_eval(args: &EvalArgs) -> Result<Outcome> {
    let cfg = load_config(&args.config)?;
    let bounds = Bounds::new(&args.m)?;
    let path = match (&args.x, &args.path) {
        (Some(x), None) => line_from_origin(&parse_point(x)?)?,
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<PathSpec>(&text).map_err(|e| Error::Parse(format!("path file: {e}")))?
        }
        _ => return Err(Error::Parse("give exactly one of --x or --path".into())),
    };
    if path.dim() != bounds.depth() {
        return Err(Error::Precondition(format!("path lives in C^{}, bounds need C^{}", path.dim(), bounds.depth())));
    }
    let endpoint = path.end();
    let words = build_integrand(&bounds).words.len();
    let ev = if endpoint.iter().all(|z| z.norm() == 0.0) && path.segments.len() == 1 {
        // Li_m(0) = 0 along the constant path.
        Evaluation { value: C64::new(0.0, 0.0), est_error: 0.0, steps: 0 }
    } else {
        continue_eval(&bounds, &path, &cfg)?
    };
    let (series_value, oracle_agreement) = if args.check_series {
        if endpoint.iter().any(|z| z.norm() > SERIES_RADIUS) {
            return Err(Error::OutsideSeriesRegion {
                radius: endpoint.iter().map(|z| z.norm()).fold(0.0, f64::max),
                limit: SERIES_RADIUS,
            });
        }
        let s = series_eval(&bounds, &endpoint, 1e-15)?;
        (Some(s), Some((s - ev.value).norm()))
    } else {
        (None, None)
    };
    let out = EvalOutput {
        bounds: args.m.clone(),
        endpoint,
        value: ev.value,
        est_error: ev.est_error,
        words,
        steps: ev.steps,
        series_value,
        oracle_agreement,
    };
    Ok(Outcome { stdout: document("eval", out)?, code: 0 })
}

fn cmd_expand(args: &ExpandArgs) -> Result<Outcome> {
    let bounds = Bounds::new(&args.m)?;
    let integrand = build_integrand(&bounds);
    let stdout = match args.format {
        ExpandFormat::Text => render(&integrand),
        ExpandFormat::Json => {
            let products = render(&integrand).lines().map(str::to_owned).collect::<Vec<_>>();
            document(
                "expand",
                json!({
                    "bounds": args.m,
                    "n": integrand.n,
                    "word_count": integrand.words.len(),
                    "product_count": regroup(&integrand).len(),
                    "words": integrand.words,
                    "products": products,
                }),
            )?
        }
    };
    Ok(Outcome { stdout, code: 0 })
}

fn cmd_check(args: &CheckArgs) -> Result<Outcome> {
    let suite = Suite::parse(&args.suite)?;
    let mut opts = SuiteOptions::defaults(suite);
    opts.seed = args.seed;
    opts.cfg = load_config(&args.config)?;
    if let Some(t) = args.trials {
        opts.trials = t;
    }
    if let Some(t) = args.tol {
        opts.tolerance = t;
    }
    if let Some(m) = &args.m {
        opts.bounds = vec![Bounds::new(m)?];
    }
    let report = suites::run(suite, &opts)?;
    let code = if report.passed { 0 } else { EXIT_CHECK_FAILED };
    Ok(Outcome { stdout: document("check", report)?, code })
}

#[derive(Serialize)]
struct MonodromyOutput {
    n: usize,
    point: Vec<C64>,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    tolerance: f64,
    passed: bool,
    #[serde(flatten)]
    result: MonodromyResult,
}

fn cmd_monodromy(args: &MonodromyArgs) -> Result<Outcome> {
    let cfg = load_config(&args.config)?;
    let n = args.n;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let point = match &args.x {
        Some(x) => parse_point(x)?,
        None => Sampler::new(args.seed).polydisk(n),
    };
    if point.len() != n {
        return Err(Error::Precondition(format!("point has {} coordinates, n = {n}", point.len())));
    }
    let (kind, family, result, default_tol) = match (args.family, &args.component) {
        (Some(f), _) => {
            let fam = match f {
                FamilyArg::J0 => FFamily::J0,
                FamilyArg::OneJ => FFamily::OneJ,
                FamilyArg::Jn => FFamily::JN,
            };
            let j = args.j.ok_or_else(|| Error::Parse("--family needs --j".into()))?;
            ("f_relation", Some(format!("{fam:?}")), check_f_relation(&point, fam, j, &cfg)?, 1e-4)
        }
        (None, Some(c)) => match parse_component(c, n)? {
            DivisorComponent::ProductOne(s, j) if j + 1 == n => ("explicit", None, check_dsn(&point, s + 1, &cfg)?, 1e-4),
            comp => ("trivial", None, check_trivial(&point, comp, &cfg)?, 1e-7),
        },
        (None, None) => return Err(Error::Parse("give --component or --family".into())),
    };
    let tolerance = args.tol.unwrap_or(default_tol);
    let passed = result.abs_err <= tolerance;
    let out = MonodromyOutput { n, point, kind, family, tolerance, passed, result };
    Ok(Outcome { stdout: document("monodromy", out)?, code: if passed { 0 } else { EXIT_CHECK_FAILED } })
}

/// Run the CLI on explicit arguments (including the program name).
pub fn run_with<I, T>(argv: I) -> (Outcome, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (Outcome { stdout: text, code }, None)
            } else {
                (Outcome { stdout: String::new(), code }, Some(text))
            };
        }
    };
    let res = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Check(a) => cmd_check(a),
        Command::Monodromy(a) => cmd_monodromy(a),
    };
    match res {
        Ok(o) => (o, None),
        Err(e) => (Outcome { stdout: String::new(), code: exit_code(&e) }, Some(format!("error: {e}"))),
    }
}

pub fn run() -> i32 {
    let (out, err) = run_with(std::env::args_os());
    if !out.stdout.is_empty() {
        let _ = writeln!(std::io::stdout().lock(), "{}", out.stdout);
    }
    if let Some(e) = err {
        let _ = writeln!(std::io::stderr().lock(), "{}", e.trim_end());
    }
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let c = |re, im| C64::new(re, im);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("0.3+0.1i").unwrap(), c(0.3, 0.1));
        assert_eq!(parse_complex("-0.3-0.1i").unwrap(), c(-0.3, -0.1));
        assert_eq!(parse_complex("1e-3-2e-1i").unwrap(), c(1e-3, -0.2));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("0.3:-0.2").unwrap(), c(0.3, -0.2));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn component_parsing() {
        assert_eq!(parse_component("Z:1", 2).unwrap(), DivisorComponent::CoordZero(0));
        assert_eq!(parse_component("D:2,3", 3).unwrap(), DivisorComponent::ProductOne(1, 2));
        assert!(parse_component("D:3,2", 3).is_err());
        assert!(parse_component("Z:0", 3).is_err());
        assert!(parse_component("Z:4", 3).is_err());
        assert!(parse_component("Q:1", 3).is_err());
    }

    #[test]
    fn config_parsing() {
        let cfg = parse_config("# tolerances\nrel_tol = 1e-8\ndelta_min=0.01  # tighter\n\nmax_steps = 1000\n").unwrap();
        assert_eq!(cfg.rel_tol, 1e-8);
        assert_eq!(cfg.delta_min, 0.01);
        assert_eq!(cfg.max_steps, 1000);
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("rel_tol 1").is_err());
        assert!(parse_config("rel_tol = -1").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidPath("x".into())), EXIT_PATH_INVALID);
        assert_eq!(exit_code(&Error::NonConvergence("x".into())), EXIT_NO_CONVERGENCE);
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_BAD_ARGS);
    }
}
