//! Command-line front end for `finpart`.
//!
//! [`run`] parses an argument vector, dispatches to the numerical library
//! and renders exactly one JSON (or CSV) document. Nothing time-dependent
//! reaches the rendered output; wall time is reported separately.

pub mod exprs;
pub mod kernels;
pub mod output;
pub mod verify;

use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use finpart::combinatorics::{
    bernoulli_higher_order, bernoulli_number, bernoulli_second_kind, euler_number, format_rational, partition_count,
    stirling_first_signed, stirling_second,
};
use finpart::contour::{fpi_epsilon_oracle, fpi_log, QuadratureConfig, Upper};
use finpart::reglim::{
    reglim_contour_oracle, reglim_corollary, reglim_ratio, reglim_ratio_compositions, DerivativeOracle, CAUCHY_RADIUS,
    ORACLE_GRID, ORACLE_TOL,
};
use finpart::specialfun::{
    bessel_j0, complex_gamma, csc_derivative, digamma, gauss_2f1, gauss_2f1_db, ln_gamma, polygamma, sec_derivative,
    zeta_integer,
};
use finpart::stieltjes::{stieltjes_leading_asymptotic, stieltjes_series, StieltjesConfig, StieltjesProblem};
use finpart::C64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{complex, Format};

/// Environment variable capping integrand evaluations per top-level call.
pub const MAX_EVALS_ENV: &str = "FINPART_MAX_EVALS";

/// Bad command line or unusable input; maps to exit status 2.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Numeric(#[from] finpart::Error),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, detail) = match self {
            CliError::Usage(e) => ("usage", e.0.clone()),
            CliError::Numeric(e) => (e.kind(), e.to_string()),
        };
        json!({ "error": { "kind": kind, "detail": detail } })
    }
}

#[derive(Debug, Parser)]
#[command(name = "finpart", version, about = "Finite-part integrals, regularized limits and Stieltjes transforms")]
pub struct Cli {
    /// Relative tolerance for quadrature and series truncation.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Pretty-print JSON with this many spaces of indentation.
    #[arg(long, global = true)]
    pub json_indent: Option<usize>,
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-part integral FP int_0^a k(t) ln^n t / t^lambda dt.
    Fpi(FpiArgs),
    /// Generalized Stieltjes transform int_0^a k(t) ln^n t / (t^nu (omega^2 + t^2)) dt.
    Stieltjes(StieltjesArgs),
    /// Regularized limit of a named ratio f/g.
    Reglim(ReglimArgs),
    /// Exact number families, printed as "p/q".
    Numbers {
        #[command(subcommand)]
        family: NumbersCmd,
    },
    /// Special-function evaluation.
    Specialfun {
        #[command(subcommand)]
        cmd: SpecialfunCmd,
    },
    /// Run an acceptance suite: identities, fpi, reglim, stieltjes or all.
    Verify { suite: String },
    /// List the built-in kernels and reglim expressions.
    Registry,
}

#[derive(Debug, Args)]
pub struct FpiArgs {
    /// Registry id such as `exp(2)` or `sqrt-ratio(1.5,1)`, or a Taylor-file path.
    #[arg(long)]
    pub kernel: String,
    /// Exponent `re[,im]`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value_t = 0)]
    pub log_order: usize,
    /// Upper limit: a positive number or `inf`.
    #[arg(long)]
    pub upper: String,
    /// Circle radius of the keyhole contour.
    #[arg(long)]
    pub eps: Option<f64>,
    /// `contour` or `epsilon`.
    #[arg(long, default_value = "contour")]
    pub method: String,
}

#[derive(Debug, Args)]
pub struct StieltjesArgs {
    #[arg(long)]
    pub kernel: String,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: f64,
    #[arg(long, default_value_t = 0)]
    pub log_order: usize,
    /// `re[,im]`.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: String,
    #[arg(long)]
    pub upper: String,
    /// Report only the leading small-omega term.
    #[arg(long)]
    pub asymptotic: bool,
}

#[derive(Debug, Args)]
pub struct ReglimArgs {
    /// Expression id, e.g. `cos-over-sin2` or `gamma-cot-csc(2,2)`.
    pub expr: String,
    /// Point `re[,im]`; defaults to the expression's own.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Order of the zero of g; defaults to the expression's own.
    #[arg(long)]
    pub order: Option<usize>,
    /// `partition`, `composition`, `corollary` or `oracle`.
    #[arg(long, default_value = "partition")]
    pub method: String,
}

#[derive(Debug, Subcommand)]
pub enum NumbersCmd {
    /// Stirling number of the second kind S(n, k).
    Stirling2 { n: usize, k: usize },
    /// Signed Stirling number of the first kind s(n, k).
    Stirling1 { n: usize, k: usize },
    /// Bernoulli number B_n (B_1 = -1/2).
    Bernoulli { n: usize },
    /// Bernoulli number of order m, B_n^(m).
    BernoulliHigher { m: usize, n: usize },
    /// Bernoulli number of the second kind b_n.
    Bernoulli2 { n: usize },
    /// Euler number E_n.
    Euler { n: usize },
    /// Number of integer partitions p(k).
    Partitions { k: usize },
}

#[derive(Debug, Subcommand)]
pub enum SpecialfunCmd {
    /// `gamma z`, `lngamma z`, `digamma z`, `polygamma j z`, `j0 z`, `zeta s`,
    /// `hyp2f1 a b c z`, `hyp2f1-db order a b c z`, `sec-der j nu`, `csc-der j nu`.
    /// Complex arguments are written `re,im`.
    Eval {
        name: String,
        #[arg(num_args = 0.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

/// Outcome of one invocation.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: Vec<String>,
    pub payload: Value,
    /// Rendered standard output (one document, newline-terminated).
    pub stdout: String,
    /// Zero iff no error was raised and no verification case failed.
    pub status: i32,
    pub wall_time: Duration,
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, UsageError> {
    let bad = || UsageError(format!("expected `re` or `re,im`, got `{s}`"));
    let mut it = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = it.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match it.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

pub fn parse_upper(s: &str) -> Result<Upper, UsageError> {
    match s.trim() {
        "inf" | "infinity" => Ok(Upper::Infinite),
        t => match t.parse::<f64>() {
            Ok(a) if a > 0.0 && a.is_finite() => Ok(Upper::Finite(a)),
            _ => Err(UsageError(format!("upper limit must be a positive number or `inf`, got `{s}`"))),
        },
    }
}

fn max_evals_from_env() -> Result<Option<u64>, UsageError> {
    match std::env::var(MAX_EVALS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| UsageError(format!("{MAX_EVALS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn quad_config(tol: Option<f64>) -> Result<QuadratureConfig, UsageError> {
    let mut cfg = QuadratureConfig { max_evals: max_evals_from_env()?, ..QuadratureConfig::default() };
    if let Some(t) = tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(UsageError(format!("--tol must lie in (0, 1), got {t}")));
        }
        cfg.rel_tol = t;
        cfg.abs_tol = cfg.abs_tol.min(t);
    }
    Ok(cfg)
}

/// Parses `argv` (including the program name), runs the command and
/// renders its output.
pub fn run<I, T>(argv: I) -> RunReport
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let start = Instant::now();
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let command = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let finish = |payload: Value, status: i32, format: Format| RunReport {
        command,
        stdout: output::render(&payload, format),
        payload,
        status,
        wall_time: start.elapsed(),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return finish(json!({ "help": e.to_string() }), 0, Format::default());
            }
            let err = CliError::Usage(UsageError(e.to_string().trim_end().to_string()));
            return finish(err.to_json(), 2, Format::default());
        }
    };
    let format = if cli.csv { Format::Csv } else { Format::Json { indent: cli.json_indent } };
    match dispatch(&cli) {
        Ok((payload, ok)) => finish(payload, if ok { 0 } else { 1 }, format),
        Err(e) => finish(e.to_json(), e.status(), format),
    }
}

/// Returns the payload and whether the command succeeded.
fn dispatch(cli: &Cli) -> Result<(Value, bool), CliError> {
    let quad = quad_config(cli.tol)?;
    let payload = match &cli.command {
        Command::Fpi(a) => fpi(a, quad)?,
        Command::Stieltjes(a) => stieltjes(a, quad, cli.tol)?,
        Command::Reglim(a) => reglim(a)?,
        Command::Numbers { family } => numbers(family)?,
        Command::Specialfun { cmd: SpecialfunCmd::Eval { name, args } } => specialfun(name, args)?,
        Command::Verify { suite } => {
            let s = verify::Suite::parse(suite).ok_or_else(|| {
                UsageError(format!("unknown suite `{suite}`; use identities, fpi, reglim, stieltjes or all"))
            })?;
            let report = verify::run_suite(s, &quad);
            let ok = report.failed == 0;
            return Ok((serde_json::to_value(report).expect("report serializes"), ok));
        }
        Command::Registry => registry(),
    };
    Ok((payload, true))
}

fn fpi(a: &FpiArgs, mut cfg: QuadratureConfig) -> Result<Value, CliError> {
    let k = kernels::resolve_kernel(&a.kernel)?;
    let lambda = parse_complex(&a.lambda)?;
    let upper = parse_upper(&a.upper)?;
    k.check_upper(upper.value())?;
    if let Some(e) = a.eps {
        if !(e > 0.0) {
            return Err(UsageError(format!("--eps must be positive, got {e}")).into());
        }
        cfg.epsilon = Some(e);
    }
    let r = match a.method.as_str() {
        "contour" => fpi_log(&k.kernel, lambda, a.log_order, upper, &cfg)?,
        "epsilon" => fpi_epsilon_oracle(&k.kernel, lambda, a.log_order, upper, &cfg)?,
        m => return Err(UsageError(format!("unknown method `{m}`; use contour or epsilon")).into()),
    };
    let d = &r.diagnostics;
    Ok(json!({
        "value": complex(r.value),
        "est_error": r.est_error,
        "diagnostics": {
            "method": d.method,
            "kernel": k.kernel.id(),
            "epsilon": d.epsilon,
            "tail": d.tail,
            "evaluations": d.evaluations,
            "terms": d.terms,
        },
    }))
}

fn stieltjes(a: &StieltjesArgs, quad: QuadratureConfig, tol: Option<f64>) -> Result<Value, CliError> {
    let k = kernels::resolve_kernel(&a.kernel)?;
    let upper = parse_upper(&a.upper)?;
    k.check_upper(upper.value())?;
    let omega = parse_complex(&a.omega)?;
    let p = StieltjesProblem::new(k.kernel, a.nu, a.log_order, omega, upper)?;
    if a.asymptotic {
        let lead = stieltjes_leading_asymptotic(&p)?;
        return Ok(json!({
            "value": complex(lead),
            "est_error": Value::Null,
            "series": Value::Null,
            "leading_term": complex(lead),
        }));
    }
    let mut cfg = StieltjesConfig { quad, ..StieltjesConfig::default() };
    if let Some(t) = tol {
        cfg.series_rel_tol = cfg.series_rel_tol.max(t.min(1e-6));
    }
    let r = stieltjes_series(&p, &cfg)?;
    Ok(json!({
        "value": complex(r.value),
        "est_error": r.est_error,
        "series": { "terms": r.series.terms, "ratio": r.series.ratio },
        "leading_term": complex(r.leading_term),
    }))
}

fn reglim(a: &ReglimArgs) -> Result<Value, CliError> {
    let x = exprs::expression(&a.expr)?;
    let at = match &a.at {
        Some(s) => parse_complex(s)?,
        None => C64::new(x.at, 0.0),
    };
    let n = a.order.unwrap_or(x.order);
    let r = match a.method.as_str() {
        "oracle" => reglim_contour_oracle(|l| (x.f)(l) / (x.g)(l), at, 0.25, ORACLE_GRID, ORACLE_TOL)?,
        m => {
            let f = DerivativeOracle::cauchy(at, 2 * n, CAUCHY_RADIUS, &x.f)?;
            let g = DerivativeOracle::cauchy(at, 2 * n, CAUCHY_RADIUS, &x.g)?;
            match m {
                "partition" => reglim_ratio(&f, &g, n)?,
                "composition" => reglim_ratio_compositions(&f, &g, n)?,
                "corollary" => reglim_corollary(n, &f, &g)?,
                _ => {
                    return Err(UsageError(format!(
                        "unknown method `{m}`; use partition, composition, corollary or oracle"
                    ))
                    .into())
                }
            }
        }
    };
    // the closed form is only known at the expression's own point
    let expected = x.expected.filter(|_| at == C64::new(x.at, 0.0) && n == x.order).map(complex);
    Ok(json!({
        "value": complex(r.value),
        "method": r.method.tag(),
        "diagnostics": {
            "expression": x.id,
            "at": complex(at),
            "order": n,
            "terms": r.terms,
            "est_error": r.est_error,
            "expected": expected,
        },
    }))
}

fn numbers(cmd: &NumbersCmd) -> Result<Value, CliError> {
    let s = match *cmd {
        NumbersCmd::Stirling2 { n, k } => stirling_second(n, k)?.to_string(),
        NumbersCmd::Stirling1 { n, k } => stirling_first_signed(n, k)?.to_string(),
        NumbersCmd::Bernoulli { n } => format_rational(&bernoulli_number(n)),
        NumbersCmd::BernoulliHigher { m, n } => format_rational(&bernoulli_higher_order(m, n)?),
        NumbersCmd::Bernoulli2 { n } => format_rational(&bernoulli_second_kind(n)),
        NumbersCmd::Euler { n } => euler_number(n).to_string(),
        NumbersCmd::Partitions { k } => partition_count(k)?.to_string(),
    };
    Ok(json!({ "value": s }))
}

fn specialfun(name: &str, args: &[String]) -> Result<Value, CliError> {
    let want = |k: usize| -> Result<(), UsageError> {
        if args.len() == k {
            Ok(())
        } else {
            Err(UsageError(format!("`{name}` takes {k} argument(s), got {}", args.len())))
        }
    };
    let z = |i: usize| parse_complex(&args[i]);
    let index = |i: usize| -> Result<usize, UsageError> {
        args[i].parse().map_err(|_| UsageError(format!("expected a nonnegative integer, got `{}`", args[i])))
    };
    let v = match name {
        "gamma" | "lngamma" | "digamma" | "j0" => {
            want(1)?;
            let x = z(0)?;
            match name {
                "gamma" => complex_gamma(x)?,
                "lngamma" => ln_gamma(x)?,
                "digamma" => digamma(x)?,
                _ => bessel_j0(x)?,
            }
        }
        "polygamma" | "sec-der" | "csc-der" => {
            want(2)?;
            let (j, x) = (index(0)?, z(1)?);
            match name {
                "polygamma" => polygamma(j, x)?,
                "sec-der" => sec_derivative(j, x)?,
                _ => csc_derivative(j, x)?,
            }
        }
        "zeta" => {
            want(1)?;
            let s: i64 =
                args[0].parse().map_err(|_| UsageError(format!("zeta takes an integer, got `{}`", args[0])))?;
            C64::new(zeta_integer(s)?, 0.0)
        }
        "hyp2f1" => {
            want(4)?;
            gauss_2f1(z(0)?, z(1)?, z(2)?, z(3)?)?
        }
        "hyp2f1-db" => {
            want(5)?;
            gauss_2f1_db(index(0)?, z(1)?, z(2)?, z(3)?, z(4)?)?
        }
        _ => return Err(UsageError(format!("unknown special function `{name}`")).into()),
    };
    Ok(json!({ "name": name, "value": complex(v) }))
}

fn registry() -> Value {
    let kernels: Vec<Value> = kernels::REGISTRY
        .iter()
        .map(|e| json!({ "id": e.id, "params": e.params, "defaults": e.defaults, "doc": e.doc }))
        .collect();
    let exprs: Vec<Value> =
        exprs::EXPRESSIONS.iter().map(|e| json!({ "id": e.id, "params": e.params, "doc": e.doc })).collect();
    json!({ "kernels": kernels, "expressions": exprs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Value {
        let r = run(std::iter::once("finpart").chain(args.iter().copied()));
        assert_eq!(r.status, 0, "{}", r.stdout);
        r.payload
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("-1,2").unwrap(), C64::new(-1.0, 2.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_upper("0").is_err());
        assert_eq!(parse_upper("inf").unwrap(), Upper::Infinite);
    }

    #[test]
    fn numbers_print_fractions() {
        assert_eq!(run_ok(&["numbers", "bernoulli", "2"]), json!({ "value": "1/6" }));
        assert_eq!(run_ok(&["numbers", "stirling2", "10", "5"]), json!({ "value": "42525" }));
        assert_eq!(run_ok(&["numbers", "stirling1", "6", "3"]), json!({ "value": "-225" }));
        assert_eq!(run_ok(&["numbers", "partitions", "10"]), json!({ "value": "42" }));
    }

    #[test]
    fn usage_errors_exit_with_two() {
        let r = run(["finpart", "fpi", "--kernel", "nope", "--lambda", "1.5", "--upper", "inf"]);
        assert_eq!(r.status, 2);
        assert_eq!(r.payload["error"]["kind"], "usage");
        let r = run(["finpart", "frobnicate"]);
        assert_eq!(r.status, 2);
        assert!(serde_json::from_str::<Value>(&r.stdout).is_ok());
    }

    #[test]
    fn numerical_errors_exit_with_one() {
        // sqrt-ratio tends to 1, so t^{-1} is not integrable at infinity
        let r = run(["finpart", "fpi", "--kernel", "sqrt-ratio(1.5,1)", "--lambda", "1", "--upper", "inf"]);
        assert_eq!(r.status, 1);
        assert_eq!(r.payload["error"]["kind"], "domain");
    }

    #[test]
    fn lorentzian_example() {
        let v = run_ok(&[
            "stieltjes",
            "--kernel",
            "const",
            "--nu",
            "0",
            "--log-order",
            "0",
            "--omega",
            "2",
            "--upper",
            "inf",
        ]);
        let re = v["value"]["re"].as_f64().unwrap();
        assert!((re - std::f64::consts::FRAC_PI_4).abs() < 1e-12, "{v}");
    }

    #[test]
    fn reglim_registry_limits() {
        for spec in ["exp-over-lambda", "cos-over-sin2", "gamma-cot-csc(2,2)", "gamma-psi-csc(0.5,3)"] {
            for method in ["partition", "composition", "corollary", "oracle"] {
                let v = run_ok(&["reglim", spec, "--method", method]);
                let got = v["value"]["re"].as_f64().unwrap();
                let want = v["diagnostics"]["expected"]["re"].as_f64().unwrap();
                assert!((got - want).abs() < 1e-9 * want.abs().max(1.0), "{spec} {method}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn budget_from_environment_is_enforced() {
        let cfg = QuadratureConfig { max_evals: Some(50), ..QuadratureConfig::default() };
        let k = finpart::contour::Kernel::j0sq_recip_gamma();
        let e = fpi_log(&k, C64::new(1.5, 0.0), 0, Upper::Infinite, &cfg).unwrap_err();
        assert_eq!(CliError::from(e).to_json()["error"]["kind"], "budget");
    }
}
