//! Command-line front end.
//!
//! Exit codes: 0 success, 1 hypothesis failure / empty strict window /
//! billiard self-check failure, 2 I/O, 3 parse or usage, 4 invalid
//! distribution, 5 parameter out of window, 6 computation refused or failed.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::entropy::{find_max_p, ihara_entropy, EntropyParams, ProbabilityDistribution};
use crate::error::Error as LibError;
use crate::graph::{catalog, parse_edge_list, Graph, ValidationReport};
use crate::json::{bigint_json, float, float_text, rational_json, SCHEMA};
use crate::params::{
    admissibility_certificate, audit_inequalities, AuditReport, ParamWindow, WindowMode,
    DEFAULT_ROOT_TOL,
};
use crate::poly::IntPoly;
use crate::series::{rat, TruncatedSeries};
use crate::symbolic::{
    count_by_length, enumerate_primes, euler_product_series, prime_counts_from_traces,
};
use crate::zeta::IharaZeta;

/// Environment variable holding the default root tolerance.
pub const TOL_ENV: &str = "IHARA_LAB_TOL";
const DEFAULT_ORDER: usize = 8;
const DEFAULT_MAX_LEN: usize = 6;
const CSV_POINTS: usize = 100;
const R_SAMPLES: usize = 20;

/// Determinant factor of `1/ζ` for the built-in billiard graph, as published;
/// the full reciprocal is `(1 - x²)³` times this.
pub const BILLIARD_REFERENCE_FACTOR: [i64; 11] = [1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48];
pub const BILLIARD_REFERENCE_CYCLE_EXPONENT: usize = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ihara-lab",
    version,
    about = "Ihara zeta functions, thresholds and entropy of finite graphs"
)]
pub struct Cli {
    /// Plain key=value file with defaults for `tol`, `order`, `max_len`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Absolute root tolerance on x for bisection.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaForm {
    Det,
    Series,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for WindowMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => WindowMode::Strict,
            ModeArg::Relaxed => WindowMode::Relaxed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the graph hypotheses (simple, connected, min degree 2, not a cycle).
    Validate { graph: PathBuf },
    /// Print 1/ζ as a polynomial, or ζ as a series; `--output csv` prints a grid.
    Zeta {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "det")]
        form: ZetaForm,
        /// Series order for `series` and `euler` (default 8).
        #[arg(long)]
        order: Option<usize>,
        /// Grid size for CSV output.
        #[arg(long, default_value_t = CSV_POINTS)]
        points: usize,
    },
    /// Perron root of the non-backtracking matrix, two routes.
    Lambda { graph: PathBuf },
    /// Thresholds x0, x1, the σ limit and the admissible range of a.
    Params {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "relaxed")]
        mode: ModeArg,
    },
    /// Entropy of a distribution file (whitespace-separated probabilities).
    Entropy {
        graph: PathBuf,
        dist: PathBuf,
        /// Defaults to x0/2.
        #[arg(long)]
        a: Option<f64>,
        /// Defaults to half the σ limit at `a`, capped at 1/2.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_enum, default_value = "relaxed")]
        mode: ModeArg,
        /// Rescale inputs that do not sum to 1.
        #[arg(long)]
        normalize: bool,
    },
    /// Measure every inequality around x0, x1 and 1/(2mλ).
    Audit { graph: PathBuf },
    /// Count prime cycles per length.
    Primes {
        graph: PathBuf,
        /// Longest cycle length to enumerate (default 6).
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Run every stage on the built-in billiard graph and check its polynomial.
    Billiard {
        /// Also print ζ series coefficients to this order.
        #[arg(long)]
        order: Option<usize>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Lib(#[from] LibError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Usage(_) => 3,
            CliError::Failed(_) => 1,
            CliError::Lib(e) => match e {
                LibError::MalformedLine { .. }
                | LibError::SelfLoop { .. }
                | LibError::EmptyEdgeSet => 3,
                LibError::InvalidGraph(_) | LibError::EmptyStrictWindow { .. } => 1,
                LibError::InvalidDistribution(_) => 4,
                LibError::ParamOutOfWindow(_) => 5,
                _ => 6,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Tolerance and default orders after applying env, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    pub order: usize,
    pub max_len: usize,
}

impl RunConfig {
    /// Flags win over the config file, which wins over the environment.
    pub fn resolve(
        env_tol: Option<&str>,
        config_text: Option<&str>,
        flag_tol: Option<f64>,
    ) -> CliResult<Self> {
        let mut cfg = RunConfig {
            tol: DEFAULT_ROOT_TOL,
            order: DEFAULT_ORDER,
            max_len: DEFAULT_MAX_LEN,
        };
        if let Some(v) = env_tol {
            cfg.tol = parse_tol(v, TOL_ENV)?;
        }
        if let Some(text) = config_text {
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
                })?;
                let (key, value) = (key.trim(), value.trim());
                let int = |v: &str| {
                    v.parse::<usize>().map_err(|_| {
                        CliError::Usage(format!("config {key}: '{v}' is not an integer"))
                    })
                };
                match key {
                    "tol" => cfg.tol = parse_tol(value, "config tol")?,
                    "order" => cfg.order = int(value)?,
                    "max_len" => cfg.max_len = int(value)?,
                    other => return Err(CliError::Usage(format!("config: unknown key '{other}'"))),
                }
            }
        }
        if let Some(t) = flag_tol {
            cfg.tol = parse_tol(&t.to_string(), "--tol")?;
        }
        Ok(cfg)
    }
}

fn parse_tol(text: &str, source: &str) -> CliResult<f64> {
    match text.trim().parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(CliError::Usage(format!(
            "{source}: tolerance must be a positive number, got '{text}'"
        ))),
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(parse_edge_list(&read_file(path)?)?)
}

fn load_zeta(path: &Path) -> CliResult<IharaZeta> {
    Ok(IharaZeta::new(&load_graph(path)?)?)
}

fn document(command: &str, body: Value) -> Value {
    let mut doc = json!({"schema": SCHEMA, "command": command});
    if let (Value::Object(target), Value::Object(extra)) = (&mut doc, body) {
        target.extend(extra);
    }
    doc
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// What a command wants printed, plus an exit code.
struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }
}

/// Parse arguments, run, and write to the given streams; returns the exit code.
pub fn run<I, T>(args: I, env_tol: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                3
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, env_tol.as_deref()) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = err.write_all(o.stderr.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let env_tol = std::env::var(TOL_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(
        std::env::args_os(),
        env_tol,
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

fn execute(cli: &Cli, env_tol: Option<&str>) -> CliResult<Outcome> {
    let config_text = cli.config.as_deref().map(read_file).transpose()?;
    let cfg = RunConfig::resolve(env_tol, config_text.as_deref(), cli.tol)?;
    let output = cli.output;
    match &cli.command {
        Command::Validate { graph } => cmd_validate(graph, output),
        Command::Zeta {
            graph,
            form,
            order,
            points,
        } => cmd_zeta(graph, *form, order.unwrap_or(cfg.order), *points, output),
        Command::Lambda { graph } => cmd_lambda(graph, output),
        Command::Params { graph, mode } => cmd_params(graph, (*mode).into(), &cfg, output),
        Command::Entropy {
            graph,
            dist,
            a,
            sigma,
            mode,
            normalize,
        } => cmd_entropy(
            graph,
            dist,
            *a,
            *sigma,
            (*mode).into(),
            *normalize,
            &cfg,
            output,
        ),
        Command::Audit { graph } => cmd_audit(graph, &cfg, output),
        Command::Primes { graph, max_len } => {
            cmd_primes(graph, max_len.unwrap_or(cfg.max_len), output)
        }
        Command::Billiard { order } => cmd_billiard(*order, &cfg, output),
    }
}

fn reject_csv(output: Option<OutputFormat>, command: &str) -> CliResult<()> {
    if output == Some(OutputFormat::Csv) {
        return Err(CliError::Usage(format!(
            "{command}: csv output is only available for zeta"
        )));
    }
    Ok(())
}

fn validation_json(g: &Graph, report: &ValidationReport) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "duplicates_dropped": g.duplicates_dropped(),
        "pass": report.pass,
        "checks": report.checks,
        "warnings": report.warnings,
    })
}

fn validation_table(report: &ValidationReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status}  {}: {}", c.hypothesis, c.detail);
    }
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(s, "{}", if report.pass { "valid" } else { "invalid" });
    s
}

fn cmd_validate(path: &Path, output: Option<OutputFormat>) -> CliResult<Outcome> {
    reject_csv(output, "validate")?;
    let g = load_graph(path)?;
    let report = g.validate();
    let stdout = match output.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => pretty(&document("validate", validation_json(&g, &report))),
        _ => validation_table(&report),
    };
    let mut o = Outcome::ok(stdout);
    if !report.pass {
        o.code = 1;
        o.stderr = report
            .failures()
            .map(|c| format!("{}: {}\n", c.hypothesis, c.detail))
            .collect();
    }
    Ok(o)
}

/// `(1 - x²)^k · det_part` in readable form.
fn factored_text(det: &IntPoly, k: usize) -> String {
    match k {
        0 => det.pretty(),
        1 => format!("(1 - x^2) ({})", det.pretty()),
        _ => format!("(1 - x^2)^{k} ({})", det.pretty()),
    }
}

fn det_check_values(z: &IharaZeta) -> Vec<Value> {
    let poly = z.poly();
    let cycle = IntPoly::from_i64(&[1, 0, -1]).pow(poly.cycle_exponent);
    [rat(1, 2), rat(1, 3), rat(-2, 5)]
        .iter()
        .map(|x| {
            let expanded = poly.expanded.eval_rational(x);
            let factored = cycle.eval_rational(x) * poly.det_part.eval_rational(x);
            json!({
                "x": rational_json(x),
                "expanded": rational_json(&expanded),
                "factored": rational_json(&factored),
                "equal": expanded == factored,
            })
        })
        .collect()
}

fn series_table(s: &TruncatedSeries) -> String {
    let mut out = String::from("k\tcoefficient\n");
    for (k, c) in s.coefficients().iter().enumerate() {
        let _ = writeln!(out, "{k}\t{c}");
    }
    out
}

fn zeta_grid_csv(z: &IharaZeta, points: usize) -> CliResult<String> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut out = String::from("x,zeta,zeta_prime,h\n");
    let top = 0.99 * z.radius();
    for i in 0..points {
        let x = top * i as f64 / (points - 1) as f64;
        let d = z.derivatives(x)?;
        let h = z.h(x)?;
        let _ = writeln!(
            out,
            "{},{},{},{}",
            float_text(x),
            float_text(d.zeta),
            float_text(d.d1),
            float_text(h)
        );
    }
    Ok(out)
}

fn cmd_zeta(
    path: &Path,
    form: ZetaForm,
    order: usize,
    points: usize,
    output: Option<OutputFormat>,
) -> CliResult<Outcome> {
    let z = load_zeta(path)?;
    let output = output.unwrap_or(OutputFormat::Json);
    if output == OutputFormat::Csv {
        return Ok(Outcome::ok(zeta_grid_csv(&z, points)?));
    }
    let poly = z.poly();
    let (body, table) = match form {
        ZetaForm::Det => {
            let coeffs: Vec<Value> = poly.coefficients().iter().map(bigint_json).collect();
            let det: Vec<Value> = poly
                .det_part
                .coefficients()
                .iter()
                .map(bigint_json)
                .collect();
            let factored = factored_text(&poly.det_part, poly.cycle_exponent);
            let body = json!({
                "form": "det",
                "degree": poly.degree(),
                "coefficients": coeffs,
                "det_part": det,
                "cycle_exponent": poly.cycle_exponent,
                "factored": factored,
                "check_values": det_check_values(&z),
            });
            let mut table = format!(
                "1/zeta(x) = {factored}\nexpanded: {}\nk\tcoefficient\n",
                poly.expanded.pretty()
            );
            for (k, c) in poly.coefficients().iter().enumerate() {
                let _ = writeln!(table, "{k}\t{c}");
            }
            (body, table)
        }
        ZetaForm::Series => {
            let s = z.series(order)?;
            (
                json!({"form": "series", "series": s.to_json()}),
                series_table(&s),
            )
        }
        ZetaForm::Euler => {
            let primes = enumerate_primes(z.graph(), order)?;
            let s = euler_product_series(&primes, order, order)?;
            (
                json!({"form": "euler", "prime_count": primes.len(), "series": s.to_json()}),
                series_table(&s),
            )
        }
    };
    Ok(Outcome::ok(match output {
        OutputFormat::Json => pretty(&document("zeta", body)),
        _ => table,
    }))
}

fn cmd_lambda(path: &Path, output: Option<OutputFormat>) -> CliResult<Outcome> {
    reject_csv(output, "lambda")?;
    let z = load_zeta(path)?;
    let s = z.spectral();
    let rel = (s.lambda - s.lambda_power).abs() / s.lambda;
    let body = json!({
        "lambda": float(s.lambda),
        "lambda_power_iteration": float(s.lambda_power),
        "relative_difference": float(rel),
        "power_iterations": s.power_iterations,
        "power_bracket": [float(s.power_bracket.0), float(s.power_bracket.1)],
        "lower_bound": float(s.lower_bound),
        "upper_bound": float(s.upper_bound),
        "radius": float(s.radius),
    });
    Ok(Outcome::ok(match output.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => pretty(&document("lambda", body)),
        _ => key_value_table(&body),
    }))
}

fn key_value_table(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            let _ = writeln!(s, "{k}\t{val}");
        }
    }
    s
}

fn cmd_params(
    path: &Path,
    mode: WindowMode,
    cfg: &RunConfig,
    output: Option<OutputFormat>,
) -> CliResult<Outcome> {
    reject_csv(output, "params")?;
    let z = load_zeta(path)?;
    let w = ParamWindow::compute_with_tol(&z, mode, cfg.tol)?;
    let usable = w.require_usable();
    let mut body = w.to_json();
    if usable.is_ok() {
        let cert = admissibility_certificate(&w, &z, w.default_a, w.default_sigma, R_SAMPLES)?;
        body["admissibility"] = json!({
            "a": float(cert.a),
            "sigma": float(cert.sigma),
            "samples": R_SAMPLES + 1,
            "min_r": float(cert.min_r),
            "all_positive": cert.all_positive,
        });
    }
    let stdout = match output.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => pretty(&document("params", body)),
        _ => key_value_table(&body),
    };
    let mut o = Outcome::ok(stdout);
    if let Err(e) = usable {
        o.code = CliError::from(e).exit_code();
        o.stderr = format!(
            "error: strict window (x1, x0) is empty: x1 = {} >= x0 = {}\n",
            float_text(w.x1),
            float_text(w.x0)
        );
    }
    Ok(o)
}

#[allow(clippy::too_many_arguments)]
fn cmd_entropy(
    graph: &Path,
    dist: &Path,
    a: Option<f64>,
    sigma: Option<f64>,
    mode: WindowMode,
    normalize: bool,
    cfg: &RunConfig,
    output: Option<OutputFormat>,
) -> CliResult<Outcome> {
    reject_csv(output, "entropy")?;
    let z = load_zeta(graph)?;
    let dist_text = read_file(dist)?;
    let p = ProbabilityDistribution::parse(&dist_text, normalize)?;
    let w = ParamWindow::compute_with_tol(&z, mode, cfg.tol)?;
    let params = EntropyParams::new(&z, &w, a, sigma)?;
    let value = ihara_entropy(&z, &params, &p)?;
    let max = find_max_p(&z, &params)?;
    let body = json!({
        "value": float(value),
        "shannon": float(p.shannon()),
        "events": p.len(),
        "params": params.to_json(),
        "window": w.to_json(),
        "max_term": {"p": float(max.p), "s": float(max.value)},
    });
    Ok(Outcome::ok(match output.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => pretty(&document("entropy", body)),
        _ => format!(
            "value\t{}\nshannon\t{}\n",
            float_text(value),
            float_text(p.shannon())
        ),
    }))
}

fn audit_table(report: &AuditReport) -> String {
    let width = report
        .entries
        .iter()
        .map(|e| e.claim_id.len())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:width$}  holds  {:>24}  {:>24}  claim",
        "claim_id", "lhs", "rhs"
    );
    for e in &report.entries {
        let _ = writeln!(
            s,
            "{:width$}  {:5}  {:>24}  {:>24}  {}",
            e.claim_id,
            if e.holds { "yes" } else { "NO" },
            float_text(e.lhs),
            float_text(e.rhs),
            e.paper_location
        );
    }
    let held = report.entries.iter().filter(|e| e.holds).count();
    let _ = writeln!(s, "{held} of {} claims hold", report.entries.len());
    s
}

fn cmd_audit(path: &Path, cfg: &RunConfig, output: Option<OutputFormat>) -> CliResult<Outcome> {
    reject_csv(output, "audit")?;
    let z = load_zeta(path)?;
    let w = ParamWindow::compute_with_tol(&z, WindowMode::Relaxed, cfg.tol)?;
    let report = audit_inequalities(&z, &w)?;
    Ok(Outcome::ok(match output.unwrap_or(OutputFormat::Table) {
        OutputFormat::Json => pretty(&document(
            "audit",
            json!({
                "vertices": z.graph().vertex_count(),
                "edges": z.edge_count(),
                "window": w.to_json(),
                "claims": report.to_json(),
            }),
        )),
        _ => audit_table(&report),
    }))
}

fn cmd_primes(path: &Path, max_len: usize, output: Option<OutputFormat>) -> CliResult<Outcome> {
    reject_csv(output, "primes")?;
    let g = load_graph(path)?;
    g.require_valid()?;
    let primes = enumerate_primes(&g, max_len)?;
    let counts = count_by_length(&primes, max_len);
    let from_traces = prime_counts_from_traces(&g, max_len);
    let agree = counts == from_traces;
    let stdout = match output.unwrap_or(OutputFormat::Table) {
        OutputFormat::Json => {
            let table: BTreeMap<String, Value> = counts
                .iter()
                .map(|(l, c)| (l.to_string(), bigint_json(c)))
                .collect();
            pretty(&document(
                "primes",
                json!({
                    "max_len": max_len,
                    "counts": table,
                    "counts_match_traces": agree,
                    "primes": primes.iter().map(|p| p.symbols.clone()).collect::<Vec<_>>(),
                }),
            ))
        }
        _ => {
            let mut s = String::from("length\tprimes\tfrom_traces\n");
            for (l, c) in &counts {
                let _ = writeln!(s, "{l}\t{c}\t{}", from_traces[l]);
            }
            s
        }
    };
    if !agree {
        return Err(CliError::Lib(LibError::Internal(
            "prime counts disagree with trace inversion".into(),
        )));
    }
    Ok(Outcome::ok(stdout))
}

fn cmd_billiard(
    order: Option<usize>,
    cfg: &RunConfig,
    output: Option<OutputFormat>,
) -> CliResult<Outcome> {
    reject_csv(output, "billiard")?;
    let g = catalog::billiard();
    let report = g.validate();
    let z = IharaZeta::new(&g)?;
    let poly = z.poly();
    let reference = IntPoly::from_i64(&[1, 0, -1])
        .pow(BILLIARD_REFERENCE_CYCLE_EXPONENT)
        .mul(&IntPoly::from_i64(&BILLIARD_REFERENCE_FACTOR));
    let poly_ok = poly.expanded == reference;
    let series = order.map(|n| z.series(n)).transpose()?;
    let w = ParamWindow::compute_with_tol(&z, WindowMode::Relaxed, cfg.tol)?;
    let params = EntropyParams::new(&z, &w, None, None)?;
    let uniform = ProbabilityDistribution::uniform(5);
    let entropy = ihara_entropy(&z, &params, &uniform)?;
    let audit = audit_inequalities(&z, &w)?;
    let pass = report.pass && poly_ok;

    let stdout = match output.unwrap_or(OutputFormat::Table) {
        OutputFormat::Json => {
            let mut body = json!({
                "validation": validation_json(&g, &report),
                "reciprocal_zeta": {
                    "factored": factored_text(&poly.det_part, poly.cycle_exponent),
                    "coefficients": poly.coefficients().iter().map(bigint_json).collect::<Vec<_>>(),
                    "matches_reference": poly_ok,
                },
                "params": w.to_json(),
                "entropy_uniform_5": {"value": float(entropy), "params": params.to_json()},
                "audit": audit.to_json(),
                "pass": pass,
            });
            if let Some(s) = &series {
                body["series"] = s.to_json();
            }
            pretty(&document("billiard", body))
        }
        _ => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "billiard graph: {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            );
            let _ = writeln!(s, "validate: {}", if report.pass { "PASS" } else { "FAIL" });
            let _ = writeln!(
                s,
                "1/zeta(x) = {}",
                factored_text(&poly.det_part, poly.cycle_exponent)
            );
            let _ = writeln!(s, "expanded: {}", poly.expanded.pretty());
            let _ = writeln!(
                s,
                "matches reference polynomial: {}",
                if poly_ok { "PASS" } else { "FAIL" }
            );
            if let Some(series) = &series {
                let coeffs: Vec<String> = series
                    .coefficients()
                    .iter()
                    .map(|c| c.to_string())
                    .collect();
                let _ = writeln!(
                    s,
                    "zeta series to order {}: {}",
                    series.order(),
                    coeffs.join(" ")
                );
            }
            let _ = writeln!(
                s,
                "params (relaxed): lambda = {}, x0 = {}, x1 = {}, l_sigma = {}",
                float_text(w.lambda),
                float_text(w.x0),
                float_text(w.x1),
                float_text(w.l_sigma)
            );
            let _ = writeln!(
                s,
                "entropy (uniform, W = 5, a = {}, sigma = {}): {}",
                float_text(params.a),
                float_text(params.sigma),
                float_text(entropy)
            );
            s.push_str("audit:\n");
            s.push_str(&audit_table(&audit));
            let _ = writeln!(s, "{}", if pass { "PASS" } else { "FAIL" });
            s
        }
    };
    let mut o = Outcome::ok(stdout);
    if !pass {
        o.code = 1;
        o.stderr = "billiard self-check failed\n".into();
    }
    Ok(o)
}
