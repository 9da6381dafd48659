//! Command-line front end.
//!
//! ```text
//! snm invert   (gamma|beta|elliptic|tan) [problem flags] [solve flags]
//! snm compare  (gamma|beta|elliptic|tan) [problem flags] --methods snm,halley,newton
//! snm osculate (gamma|beta|elliptic|tan) [problem flags] --range lo:hi [--x0 x] [--samples n]
//! ```
//!
//! Problem flags: gamma takes `--a` and one of `--p`/`--q`; beta takes
//! `--a --b` and one of `--p`/`--q`; elliptic takes `--m --p`; tan takes
//! `--c` (the equation tan x = c, exact for the SNM).
//!
//! Tables print 12 significant digits. CSV and JSON print the shortest
//! decimal that reads back to the same double (at most 17 digits).
//!
//! Exit status: 0 on success, 1 when a solver does not converge or fails,
//! 2 on a usage error (missing or out-of-range flags).

use std::f64::consts::FRAC_PI_2;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::beta_quantile::{beta_problem, beta_xm, invert_beta, BetaQuantileQuery, BetaVariable};
use crate::elliptic_inverse::{
    elliptic_problem, ellip_start_high, invert_ellip_e, EllipticQuery,
};
use crate::error::{Error, Result};
use crate::gamma_quantile::{gamma_problem, gamma_start, invert_gamma, GammaQuantileQuery, GammaStart, GammaVariable};
use crate::oracle::bisect;
use crate::osculating::{halley_hyperbola, osculating_eval, osculating_fit, OsculatingModel};
use crate::problem::{FnProblem, Interval, Problem, ProblemEvaluation};
use crate::solver::{solve, Method, SolveOptions, SolveReport};
use crate::special::{ellip_e_inc, reg_gamma_p, reg_gamma_q, BetaParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "snm", version, about = "Schwarzian-Newton root finding and inversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invert one problem and print the root.
    Invert(InvertArgs),
    /// Run several methods from a common start and report per-iteration errors.
    Compare(CompareArgs),
    /// Sample the function and its osculating curves around an anchor.
    Osculate(OsculateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Gamma,
    Beta,
    Elliptic,
    Tan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Curve {
    Function,
    Snm,
    Halley,
    Newton,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Problem family.
    #[arg(value_enum)]
    kind: Kind,
    /// Gamma shape, or first beta shape.
    #[arg(long)]
    a: Option<f64>,
    /// Second beta shape.
    #[arg(long)]
    b: Option<f64>,
    /// Elliptic modulus in [0, 1].
    #[arg(long)]
    m: Option<f64>,
    /// Lower-tail probability (elliptic: fraction of the complete integral).
    #[arg(long)]
    p: Option<f64>,
    /// Upper-tail probability, instead of --p (gamma and beta).
    #[arg(long)]
    q: Option<f64>,
    /// Right-hand side of tan x = c.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Starting value in x, replacing the built-in start.
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Absolute step tolerance.
    #[arg(long, default_value_t = 1e-15)]
    tol: f64,
    #[arg(long, default_value_t = 30)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct InvertArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value = "snm")]
    method: Method,
    /// Print every iteration.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    solve: SolveArgs,
    /// Also print the bisection reference root.
    #[arg(long, hide = true)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_delimiter = ',', default_value = "snm,halley,newton")]
    methods: Vec<Method>,
    #[command(flatten)]
    solve: SolveArgs,
    /// Also print the bisection reference root.
    #[arg(long, hide = true)]
    oracle: bool,
}

#[derive(Debug, Args)]
struct OsculateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Sample interval as lo:hi.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: (f64, f64),
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "function,snm,halley,newton")]
    curves: Vec<Curve>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err("need finite lo < hi".into());
    }
    Ok((lo, hi))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Invert(a) => cmd_invert(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
        Command::Osculate(a) => cmd_osculate(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Solver(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Solver(Error),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Solver(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A validated problem instance.
#[derive(Debug, Clone, Copy)]
enum Case {
    Gamma(GammaQuantileQuery),
    Beta(BetaQuantileQuery),
    Elliptic(EllipticQuery),
    Tan(f64),
}

fn need(v: Option<f64>, flag: &str, kind: Kind) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("{} requires --{flag}", kind_name(kind))))
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Gamma => "gamma",
        Kind::Beta => "beta",
        Kind::Elliptic => "elliptic",
        Kind::Tan => "tan",
    }
}

fn tails(args: &ProblemArgs) -> CliResult<(f64, f64)> {
    match (args.p, args.q) {
        (Some(p), None) => Ok((p, 1.0 - p)),
        (None, Some(q)) => Ok((1.0 - q, q)),
        (Some(_), Some(_)) => Err(CliError::Usage("give only one of --p and --q".into())),
        (None, None) => Err(CliError::Usage(format!("{} requires --p or --q", kind_name(args.kind)))),
    }
}

fn usage_on_domain(e: Error) -> CliError {
    match e {
        Error::Domain { .. } => CliError::Usage(e.to_string()),
        other => CliError::Solver(other),
    }
}

impl Case {
    fn from_args(args: &ProblemArgs) -> CliResult<Case> {
        let case = match args.kind {
            Kind::Gamma => {
                let a = need(args.a, "a", args.kind)?;
                let (p, q) = tails(args)?;
                Case::Gamma(GammaQuantileQuery::with_tails(a, p, q).map_err(usage_on_domain)?)
            }
            Kind::Beta => {
                let a = need(args.a, "a", args.kind)?;
                let b = need(args.b, "b", args.kind)?;
                let (p, q) = tails(args)?;
                Case::Beta(BetaQuantileQuery::with_tails(a, b, p, q).map_err(usage_on_domain)?)
            }
            Kind::Elliptic => {
                let m = need(args.m, "m", args.kind)?;
                let p = need(args.p, "p", args.kind)?;
                Case::Elliptic(EllipticQuery::new(m, p).map_err(usage_on_domain)?)
            }
            Kind::Tan => {
                let c = need(args.c, "c", args.kind)?;
                if !c.is_finite() {
                    return Err(CliError::Usage(format!("--c must be finite, got {c}")));
                }
                Case::Tan(c)
            }
        };
        if let Some(x0) = args.x0 {
            if !case.domain().contains(x0) {
                return Err(CliError::Usage(format!("--x0 {x0} is outside the problem domain")));
            }
        }
        Ok(case)
    }

    fn domain(&self) -> Interval {
        match self {
            Case::Gamma(_) => Interval::new(0.0, f64::INFINITY, true, true).expect("ordered"),
            Case::Beta(_) => Interval::open(0.0, 1.0),
            Case::Elliptic(q) => elliptic_problem(*q).expect("validated").domain(),
            Case::Tan(_) => Interval::open(-FRAC_PI_2, FRAC_PI_2),
        }
    }

    /// Value added to f to put it on the CDF scale.
    fn shift(&self) -> f64 {
        match self {
            Case::Gamma(q) => q.p,
            Case::Beta(q) => q.p,
            Case::Elliptic(_) | Case::Tan(_) => 0.0,
        }
    }

    /// f in the x variable.
    fn evaluate_x(&self, x: f64) -> Result<ProblemEvaluation> {
        match self {
            Case::Gamma(q) => gamma_problem(*q, GammaVariable::Direct).evaluate(x),
            Case::Beta(q) => beta_problem(*q, BetaVariable::Direct).evaluate(x),
            Case::Elliptic(q) => elliptic_problem(*q)?.evaluate(x),
            Case::Tan(c) => tan_problem(*c).evaluate(x),
        }
    }

    /// Default anchor for `osculate`, in x.
    fn default_anchor(&self) -> Result<f64> {
        match self {
            Case::Gamma(q) => {
                let (variable, x0) = gamma_start(q, GammaStart::default());
                Ok(if variable == GammaVariable::Log { x0.exp() } else { x0 })
            }
            Case::Beta(q) if q.a > 1.0 && q.b > 1.0 => beta_xm(q.a, q.b),
            Case::Beta(q) => Ok(q.a / (q.a + q.b)),
            Case::Elliptic(q) => ellip_start_high(q.m, q.p),
            Case::Tan(_) => Ok(0.0),
        }
    }

    /// Reference root by bisection on the forward function.
    fn oracle_root(&self) -> Result<f64> {
        match *self {
            Case::Gamma(q) => {
                let a = q.a;
                let g = |x: f64| {
                    if q.p <= 0.5 {
                        reg_gamma_p(a, x).unwrap_or(f64::NAN) - q.p
                    } else {
                        q.q - reg_gamma_q(a, x).unwrap_or(f64::NAN)
                    }
                };
                let mut hi = a.max(1.0);
                while g(hi) < 0.0 {
                    hi *= 2.0;
                }
                bisect(g, 0.0, hi, 0.0)
            }
            Case::Beta(q) => {
                let params = BetaParams::new(q.a, q.b)?;
                let swapped = params.swapped();
                bisect(
                    |x| {
                        if q.p <= 0.5 {
                            params.cdf(x).unwrap_or(f64::NAN) - q.p
                        } else {
                            q.q - swapped.cdf(1.0 - x).unwrap_or(f64::NAN)
                        }
                    },
                    0.0,
                    1.0,
                    0.0,
                )
            }
            Case::Elliptic(q) => {
                let e = elliptic_problem(q)?.complete();
                bisect(|x| ellip_e_inc(x, q.m).unwrap_or(f64::NAN) - q.p * e, 0.0, FRAC_PI_2, 0.0)
            }
            Case::Tan(c) => Ok(c.atan()),
        }
    }

    /// Solves with the module's start and variable, or from `x0` when given.
    fn solve(&self, x0: Option<f64>, opts: &SolveOptions) -> Result<Outcome> {
        match *self {
            Case::Gamma(q) => {
                if let Some(x0) = x0 {
                    let (variable, _) = gamma_start(&q, GammaStart::default());
                    let start = if variable == GammaVariable::Log { x0.ln() } else { x0 };
                    let report = solve(&gamma_problem(q, variable), start, opts)?;
                    return Ok(Outcome::gamma(report, variable));
                }
                let inv = invert_gamma(q, opts)?;
                let mut out = Outcome::gamma(inv.report, inv.variable);
                if inv.variable == GammaVariable::Log {
                    // the report root is already x; the trace stays in log x
                    out.root = out.report.root;
                }
                Ok(out)
            }
            Case::Beta(q) => {
                if let Some(x0) = x0 {
                    let variable =
                        if q.a > 1.0 && q.b > 1.0 { BetaVariable::Direct } else { BetaVariable::Logit };
                    let start = match variable {
                        BetaVariable::Direct => x0,
                        BetaVariable::Logit => (x0 / (1.0 - x0)).ln(),
                    };
                    let report = solve(&beta_problem(q, variable), start, opts)?;
                    let root = match variable {
                        BetaVariable::Direct => report.root,
                        BetaVariable::Logit => logistic(report.root),
                    };
                    return Ok(Outcome::beta(report, variable, false, root));
                }
                let inv = invert_beta(q, opts)?;
                let root = inv.report.root;
                Ok(Outcome::beta(inv.report, inv.variable, inv.reflected, root))
            }
            Case::Elliptic(q) => {
                let report = match x0 {
                    Some(x0) => solve(&elliptic_problem(q)?, x0, opts)?,
                    None => invert_ellip_e(q, opts)?.report,
                };
                Ok(Outcome::direct(report))
            }
            Case::Tan(c) => {
                let report = solve(&tan_problem(c), x0.unwrap_or(0.0), opts)?;
                Ok(Outcome::direct(report))
            }
        }
    }
}

/// f(x) = tan x - c on (-π/2, π/2).
fn tan_problem(c: f64) -> impl Problem {
    FnProblem::new(
        move |x: f64| {
            let t = x.tan();
            let s = 1.0 + t * t;
            [t - c, s, 2.0 * t * s, 2.0 * s * (1.0 + 3.0 * t * t)]
        },
        Interval::open(-FRAC_PI_2, FRAC_PI_2),
    )
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// How trace values in the solve variable map back to x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variable {
    X,
    LogX,
    LogitX,
    OneMinusX,
    LogitOneMinusX,
}

impl Variable {
    fn label(self) -> &'static str {
        match self {
            Variable::X => "x",
            Variable::LogX => "log x",
            Variable::LogitX => "logit x",
            Variable::OneMinusX => "1 - x",
            Variable::LogitOneMinusX => "logit (1 - x)",
        }
    }

    fn to_x(self, v: f64) -> f64 {
        match self {
            Variable::X => v,
            Variable::LogX => v.exp(),
            Variable::LogitX => logistic(v),
            Variable::OneMinusX => 1.0 - v,
            Variable::LogitOneMinusX => logistic(-v),
        }
    }
}

/// A solve together with the variable its trace is in and the root in x.
#[derive(Debug, Clone)]
struct Outcome {
    report: SolveReport,
    variable: Variable,
    root: f64,
}

impl Outcome {
    fn direct(report: SolveReport) -> Self {
        let root = report.root;
        Outcome { report, variable: Variable::X, root }
    }

    fn gamma(report: SolveReport, variable: GammaVariable) -> Self {
        let (variable, root) = match variable {
            GammaVariable::Direct => (Variable::X, report.root),
            GammaVariable::Log => (Variable::LogX, report.root.exp()),
        };
        Outcome { report, variable, root }
    }

    fn beta(report: SolveReport, variable: BetaVariable, reflected: bool, root: f64) -> Self {
        let variable = match (variable, reflected) {
            (BetaVariable::Direct, false) => Variable::X,
            (BetaVariable::Direct, true) => Variable::OneMinusX,
            (BetaVariable::Logit, false) => Variable::LogitX,
            (BetaVariable::Logit, true) => Variable::LogitOneMinusX,
        };
        Outcome { report, variable, root }
    }

    /// Iterates mapped to x, ending with the root.
    fn iterates_x(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.report.trace.iter().map(|r| self.variable.to_x(r.x)).collect();
        xs.push(self.root);
        xs
    }
}

fn solve_options(args: &SolveArgs, method: Method) -> CliResult<SolveOptions> {
    let opts = SolveOptions {
        abs_tol: args.tol,
        max_iter: args.max_iter,
        method,
        ..SolveOptions::default()
    };
    opts.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(opts)
}

/// 12 significant digits for tables.
fn fmt_table(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let e = v.abs().log10().floor() as i32;
    if (-5..12).contains(&e) {
        let s = format!("{:.*}", (11 - e).max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}

/// Shortest round-trip decimal for CSV.
fn fmt_exact(v: f64) -> String {
    format!("{v:?}")
}

fn json_num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn cmd_invert(args: &InvertArgs, out: &mut dyn Write) -> CliResult<i32> {
    let case = Case::from_args(&args.problem)?;
    let opts = solve_options(&args.solve, args.method)?;
    let outcome = case.solve(args.problem.x0, &opts)?;
    let oracle = if args.oracle { Some(case.oracle_root()?) } else { None };
    let r = &outcome.report;

    match args.solve.format {
        OutputFormat::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "root        {}", fmt_table(outcome.root));
            let _ = writeln!(s, "iterations  {}", r.iterations);
            let _ = writeln!(s, "converged   {}", r.converged);
            let _ = writeln!(s, "reason      {}", r.reason);
            let _ = writeln!(s, "residual    {}", fmt_table(r.residual));
            if let Some(o) = oracle {
                let _ = writeln!(s, "oracle      {}", fmt_table(o));
            }
            if args.trace {
                let _ = writeln!(s, "trace in {}", outcome.variable.label());
                let _ = writeln!(
                    s,
                    "{:>3}  {:>19}  {:>19}  {:>19}  {:>19}  {:>19}  fallback",
                    "n", "x", "f", "h", "omega", "step"
                );
                for t in &r.trace {
                    let _ = writeln!(
                        s,
                        "{:>3}  {:>19}  {:>19}  {:>19}  {:>19}  {:>19}  {}",
                        t.n,
                        fmt_table(t.x),
                        fmt_table(t.f),
                        fmt_table(t.h),
                        fmt_table(t.omega),
                        fmt_table(t.step),
                        t.fallback_used
                    );
                }
            }
            out.write_all(s.as_bytes())?;
        }
        OutputFormat::Csv => {
            let mut s = String::from("root,iterations,converged,reason,residual");
            if oracle.is_some() {
                s.push_str(",oracle");
            }
            let _ = write!(
                s,
                "\n{},{},{},{},{}",
                fmt_exact(outcome.root),
                r.iterations,
                r.converged,
                r.reason,
                fmt_exact(r.residual)
            );
            if let Some(o) = oracle {
                let _ = write!(s, ",{}", fmt_exact(o));
            }
            s.push('\n');
            if args.trace {
                // second table after a blank line
                s.push_str("\nn,x,f,h,omega,step,fallback_used\n");
                for t in &r.trace {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        t.n,
                        fmt_exact(t.x),
                        fmt_exact(t.f),
                        fmt_exact(t.h),
                        fmt_exact(t.omega),
                        fmt_exact(t.step),
                        t.fallback_used
                    );
                }
            }
            out.write_all(s.as_bytes())?;
        }
        OutputFormat::Json => {
            let trace: Vec<Value> = r
                .trace
                .iter()
                .map(|t| {
                    json!({
                        "n": t.n,
                        "x": json_num(t.x),
                        "f": json_num(t.f),
                        "h": json_num(t.h),
                        "omega": json_num(t.omega),
                        "step": json_num(t.step),
                        "fallback_used": t.fallback_used,
                    })
                })
                .collect();
            let mut v = json!({
                "root": json_num(outcome.root),
                "iterations": r.iterations,
                "converged": r.converged,
                "reason": r.reason.name(),
                "residual": json_num(r.residual),
                "method": args.method.name(),
                "variable": outcome.variable.label(),
                "trace": trace,
            });
            if let Some(o) = oracle {
                v["oracle"] = json_num(o);
            }
            writeln!(out, "{v}")?;
        }
    }
    Ok(if r.converged { EXIT_OK } else { EXIT_FAILURE })
}

/// One method's run in `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub method: Method,
    pub iterations: usize,
    pub converged: bool,
    pub reason: String,
    pub root: f64,
    pub residual: f64,
    /// |x_k - x*| for each iterate and the final root.
    pub errors: Vec<f64>,
}

fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> CliResult<i32> {
    let case = Case::from_args(&args.problem)?;
    if args.methods.is_empty() {
        return Err(CliError::Usage("--methods is empty".into()));
    }
    let oracle = case.oracle_root()?;
    let mut rows = Vec::with_capacity(args.methods.len());
    for &method in &args.methods {
        let opts = solve_options(&args.solve, method)?;
        let o = case.solve(args.problem.x0, &opts)?;
        rows.push(CompareRow {
            method,
            iterations: o.report.iterations,
            converged: o.report.converged,
            reason: o.report.reason.name().to_string(),
            root: o.root,
            residual: o.report.residual,
            errors: o.iterates_x().iter().map(|x| (x - oracle).abs()).collect(),
        });
    }
    let width = rows.iter().map(|r| r.errors.len()).max().unwrap_or(0);

    match args.solve.format {
        OutputFormat::Table => {
            let mut s = String::new();
            if args.oracle {
                let _ = writeln!(s, "oracle root {}", fmt_table(oracle));
            }
            let _ = write!(
                s,
                "{:<8}{:>6}  {:<10}{:>20}{:>20}",
                "method", "iters", "converged", "root", "residual"
            );
            for k in 0..width {
                let _ = write!(s, "{:>20}", format!("err_{k}"));
            }
            s.push('\n');
            for r in &rows {
                let _ = write!(
                    s,
                    "{:<8}{:>6}  {:<10}{:>20}{:>20}",
                    r.method.name(),
                    r.iterations,
                    r.converged,
                    fmt_table(r.root),
                    fmt_table(r.residual)
                );
                for e in &r.errors {
                    let _ = write!(s, "{:>20}", fmt_table(*e));
                }
                s.push('\n');
            }
            out.write_all(s.as_bytes())?;
        }
        OutputFormat::Csv => {
            let mut s = String::from("method,iterations,converged,reason,root,residual");
            if args.oracle {
                s.push_str(",oracle");
            }
            for k in 0..width {
                let _ = write!(s, ",err_{k}");
            }
            s.push('\n');
            for r in &rows {
                let _ = write!(
                    s,
                    "{},{},{},{},{},{}",
                    r.method.name(),
                    r.iterations,
                    r.converged,
                    r.reason,
                    fmt_exact(r.root),
                    fmt_exact(r.residual)
                );
                if args.oracle {
                    let _ = write!(s, ",{}", fmt_exact(oracle));
                }
                for k in 0..width {
                    s.push(',');
                    if let Some(e) = r.errors.get(k) {
                        s.push_str(&fmt_exact(*e));
                    }
                }
                s.push('\n');
            }
            out.write_all(s.as_bytes())?;
        }
        OutputFormat::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "method": r.method.name(),
                        "iterations": r.iterations,
                        "converged": r.converged,
                        "reason": r.reason,
                        "root": json_num(r.root),
                        "residual": json_num(r.residual),
                        "errors": r.errors.iter().map(|e| json_num(*e)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut v = json!({ "rows": rows_json });
            if args.oracle {
                v["oracle"] = json_num(oracle);
            }
            writeln!(out, "{v}")?;
        }
    }
    Ok(if rows.iter().all(|r| r.converged) { EXIT_OK } else { EXIT_FAILURE })
}

fn curve_name(c: Curve) -> &'static str {
    match c {
        Curve::Function => "function",
        Curve::Snm => "snm",
        Curve::Halley => "halley",
        Curve::Newton => "newton",
    }
}

fn cmd_osculate(args: &OsculateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let case = Case::from_args(&args.problem)?;
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    if args.curves.is_empty() {
        return Err(CliError::Usage("--curves is empty".into()));
    }
    let anchor = match args.problem.x0 {
        Some(x0) => x0,
        None => case.default_anchor()?,
    };
    let e = case.evaluate_x(anchor)?;
    let shift = case.shift();
    let snm: Result<OsculatingModel> = osculating_fit(&e);
    let halley: Result<OsculatingModel> = halley_hyperbola(&e);

    let value = |curve: Curve, x: f64| -> Option<f64> {
        let v = match curve {
            Curve::Function => case.evaluate_x(x).ok().map(|ev| ev.f),
            Curve::Snm => snm.as_ref().ok().and_then(|m| osculating_eval(m, x).ok()),
            Curve::Halley => halley.as_ref().ok().and_then(|m| osculating_eval(m, x).ok()),
            Curve::Newton => Some(e.f + e.fp * (x - anchor)),
        }?;
        let v = v + shift;
        v.is_finite().then_some(v)
    };

    let (lo, hi) = args.range;
    let n = args.samples;
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let rows: Vec<(f64, Vec<Option<f64>>)> =
        xs.iter().map(|&x| (x, args.curves.iter().map(|&c| value(c, x)).collect())).collect();

    match args.format {
        OutputFormat::Table | OutputFormat::Csv => {
            let table = args.format == OutputFormat::Table;
            let fmt = |v: f64| if table { fmt_table(v) } else { fmt_exact(v) };
            let mut s = String::new();
            if table {
                let _ = write!(s, "{:>20}", "x");
                for c in &args.curves {
                    let _ = write!(s, "{:>20}", curve_name(*c));
                }
            } else {
                s.push('x');
                for c in &args.curves {
                    let _ = write!(s, ",{}", curve_name(*c));
                }
            }
            s.push('\n');
            for (x, vals) in &rows {
                if table {
                    let _ = write!(s, "{:>20}", fmt(*x));
                    for v in vals {
                        let _ = write!(s, "{:>20}", v.map(fmt).unwrap_or_default());
                    }
                } else {
                    s.push_str(&fmt(*x));
                    for v in vals {
                        s.push(',');
                        if let Some(v) = v {
                            s.push_str(&fmt(*v));
                        }
                    }
                }
                s.push('\n');
            }
            out.write_all(s.as_bytes())?;
        }
        OutputFormat::Json => {
            let samples: Vec<Value> = rows
                .iter()
                .map(|(x, vals)| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("x".into(), json_num(*x));
                    for (c, v) in args.curves.iter().zip(vals) {
                        obj.insert(curve_name(*c).into(), v.map_or(Value::Null, json_num));
                    }
                    Value::Object(obj)
                })
                .collect();
            let v = json!({ "anchor": json_num(anchor), "samples": samples });
            writeln!(out, "{v}")?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("snm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn table_digits() {
        assert_eq!(fmt_table(1.6783469900166605), "1.67834699002");
        assert_eq!(fmt_table(0.37), "0.37");
        assert_eq!(fmt_table(-2.5e-20), "-2.50000000000e-20");
        assert_eq!(fmt_table(0.0), "0");
        assert_eq!(fmt_table(123456.0), "123456");
    }

    #[test]
    fn exact_digits_round_trip() {
        for &v in &[1.6783469900166605, 0.1, 1e-300, -3.0, 2.0f64.sqrt()] {
            assert_eq!(fmt_exact(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("15:50").unwrap(), (15.0, 50.0));
        assert_eq!(parse_range("-1.5:1").unwrap(), (-1.5, 1.0));
        assert!(parse_range("2:1").is_err());
        assert!(parse_range("2").is_err());
    }

    #[test]
    fn missing_flags_are_usage_errors() {
        assert_eq!(run_str(&["invert", "gamma", "--p", "0.5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["invert", "beta", "--a", "2", "--p", "0.5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["invert", "gamma", "--a", "2", "--p", "1.5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["invert", "cauchy", "--p", "0.5"]).0, EXIT_USAGE);
    }

    #[test]
    fn upper_tail_flag() {
        let (code, out, _) = run_str(&["invert", "gamma", "--a", "2", "--q", "0.5", "--format", "csv"]);
        assert_eq!(code, 0);
        let root: f64 = out.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert!((root - 1.6783469900166605).abs() <= 1e-15);
    }
}
