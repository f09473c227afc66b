//! Acceptance suites. Each case is tagged with the numbered acceptance
//! criterion it backs; suites run cases in a fixed order so the report is
//! reproducible.

use std::f64::consts::PI;

use finpart::combinatorics::identities::{
    bernoulli_stirling_sum, second_kind_closed_form, stirling_bernoulli_delta, stirling_orthogonality,
    stirling_second_forms, Sides,
};
use finpart::combinatorics::{format_rational, Rational};
use finpart::contour::{
    default_epsilon, fn_lambda_derivative, fn_lambda_reglim, fpi_epsilon_oracle, fpi_log, fpi_log_integer,
    fpi_log_noninteger, integer_case_log_polynomial, Kernel, QuadratureConfig, Upper,
};
use finpart::par;
use finpart::reglim::{
    cauchy_derivatives, reglim_contour_oracle, reglim_corollary, reglim_ratio, reglim_ratio_compositions,
    DerivativeOracle, ORACLE_GRID, ORACLE_TOL,
};
use finpart::specialfun::{complex_gamma, digamma, gauss_2f1, gauss_2f1_db, polygamma, BranchedLog, EULER_GAMMA};
use finpart::stieltjes::{
    stieltjes_direct_oracle, stieltjes_leading_asymptotic, stieltjes_series, StieltjesConfig, StieltjesProblem,
};
use finpart::C64;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Reference value of `FP int_0^inf J0(t)^2/(t Gamma(1+t)) dt`.
pub const BESSEL_ANCHOR: f64 = 0.212_921_064_7;

/// Seed for the manufactured regularized-limit cases.
pub const REGLIM_SEED: u64 = 0x5eed_0f_f1;
pub const REGLIM_CASES_PER_ORDER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Fpi,
    Reglim,
    Stieltjes,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "identities" => Suite::Identities,
            "fpi" => Suite::Fpi,
            "reglim" => Suite::Reglim,
            "stieltjes" => Suite::Stieltjes,
            "all" => Suite::All,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Case {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    /// Observed error in the metric the criterion states.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Report {
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<Case>,
}

impl Report {
    fn from_cases(cases: Vec<Case>) -> Self {
        let passed = cases.iter().filter(|c| c.passed).count();
        Self { passed, failed: cases.len() - passed, cases }
    }
}

type Thunk<'a> = Box<dyn Fn() -> Case + Send + Sync + 'a>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `|got - want| / max(|want|, floor)`.
pub fn scaled_error(got: C64, want: C64, floor: f64) -> f64 {
    (got - want).norm() / want.norm().max(floor)
}

fn numeric(criterion: u8, name: String, got: finpart::Result<C64>, want: C64, tol: f64, floor: f64) -> Case {
    match got {
        Ok(v) => {
            let err = scaled_error(v, want, floor);
            Case { criterion, name, passed: err <= tol, error: Some(err), tol: Some(tol), detail: String::new() }
        }
        Err(e) => failure(criterion, name, e.to_string()),
    }
}

fn failure(criterion: u8, name: String, detail: String) -> Case {
    Case { criterion, name, passed: false, error: None, tol: None, detail }
}

fn exact(criterion: u8, name: String, s: Sides) -> Case {
    let passed = s.holds();
    let detail = if passed {
        String::new()
    } else {
        format!("lhs {} != rhs {}", format_rational(&s.lhs), format_rational(&s.rhs))
    };
    Case { criterion, name, passed, error: None, tol: None, detail }
}

/// Runs `suite` with quadrature settings derived from `base`.
pub fn run_suite(suite: Suite, base: &QuadratureConfig) -> Report {
    let mut thunks: Vec<Thunk> = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        identity_cases(&mut thunks);
    }
    if matches!(suite, Suite::Fpi | Suite::All) {
        fpi_cases(&mut thunks, base);
    }
    if matches!(suite, Suite::Reglim | Suite::All) {
        reglim_cases(&mut thunks);
    }
    if matches!(suite, Suite::Stieltjes | Suite::All) {
        stieltjes_cases(&mut thunks, base);
    }
    // cases fan out; each evaluation inside stays in the configured mode
    let cases = par::map_indexed(base.execution, thunks.len(), |i| thunks[i]());
    Report::from_cases(cases)
}

fn identity_cases(out: &mut Vec<Thunk>) {
    for n in 1..=6 {
        for q in 0..=4 {
            out.push(Box::new(move || {
                exact(5, format!("stirling-bernoulli-delta n={n} q={q}"), stirling_bernoulli_delta(n, q))
            }));
        }
    }
    for l in 1..=8 {
        out.push(Box::new(move || exact(5, format!("second-kind-closed-form l={l}"), second_kind_closed_form(l))));
    }
    for m in 1..=8 {
        out.push(Box::new(move || exact(5, format!("bernoulli-stirling-sum m={m}"), bernoulli_stirling_sum(m))));
    }
    out.push(Box::new(|| {
        let bad: Vec<String> = (0..=8)
            .flat_map(|j| (j..=8).map(move |k| (j, k)))
            .filter(|&(j, k)| !stirling_orthogonality(j, k).holds())
            .map(|(j, k)| format!("({j},{k})"))
            .collect();
        Case {
            criterion: 5,
            name: "stirling-orthogonality j<=k<=8".into(),
            passed: bad.is_empty(),
            error: None,
            tol: None,
            detail: bad.join(" "),
        }
    }));
    for n in 1..=10 {
        out.push(Box::new(move || {
            let bad: Vec<usize> = (1..=n).filter(|&k| !stirling_second_forms(n, k).holds()).collect();
            Case {
                criterion: 5,
                name: format!("stirling-second compositions vs binomial n={n}"),
                passed: bad.is_empty(),
                error: None,
                tol: None,
                detail: if bad.is_empty() { String::new() } else { format!("k = {bad:?}") },
            }
        }));
    }
}

/// Kernels and upper limits shared by the epsilon-independence and oracle checks.
pub fn fpi_registry() -> Vec<(Kernel, Upper)> {
    vec![
        (Kernel::constant(), Upper::Finite(3.0)),
        (Kernel::exponential(1.0).expect("beta > 0"), Upper::Infinite),
        (Kernel::polynomial(vec![re(1.0), re(-0.5), re(0.25)]).expect("nonempty"), Upper::Finite(2.5)),
        (Kernel::sqrt_ratio(1.5, 1.0).expect("a, b > 0"), Upper::Infinite),
        (Kernel::j0sq_recip_gamma(), Upper::Infinite),
    ]
}

/// Exponents of the registry grid: non-integer `lambda` and integer `b`.
pub const GRID_LAMBDAS: [f64; 2] = [1.5, 2.5];
pub const GRID_INTEGERS: [i64; 3] = [1, 2, 3];

/// Circle radii probed around the default `eps0`. The largest radius must
/// stay inside `min(a, rho0)`; where `2 eps0` does not, `eps0/3` replaces it.
pub fn epsilon_levels(eps0: f64, upper: Upper, rho0: f64) -> [f64; 3] {
    let hi = 2.0 * eps0;
    let third = if hi < upper.value().min(rho0) { hi } else { eps0 / 3.0 };
    [eps0 / 2.0, eps0, third]
}

fn upper_label(u: Upper) -> String {
    match u {
        Upper::Finite(a) => format!("{a}"),
        Upper::Infinite => "inf".into(),
    }
}

#[derive(Clone, Copy)]
enum Exponent {
    NonInteger(f64),
    Integer(i64),
}

impl Exponent {
    fn lambda(self) -> f64 {
        match self {
            Exponent::NonInteger(l) => l,
            Exponent::Integer(b) => b as f64,
        }
    }

    fn eval(self, k: &Kernel, n: usize, upper: Upper, cfg: &QuadratureConfig) -> finpart::Result<C64> {
        match self {
            Exponent::NonInteger(l) => fpi_log_noninteger(k, re(l), n, upper, cfg).map(|r| r.value),
            Exponent::Integer(b) => fpi_log_integer(k, b, n, upper, cfg).map(|r| r.value),
        }
    }
}

fn grid_exponents() -> Vec<Exponent> {
    GRID_LAMBDAS
        .iter()
        .map(|&l| Exponent::NonInteger(l))
        .chain(GRID_INTEGERS.iter().map(|&b| Exponent::Integer(b)))
        .collect()
}

/// A grid point whose integral diverges at infinity must be rejected with a
/// domain error rather than produce a number.
fn divergent_tail_case(criterion: u8, name: String, got: finpart::Result<C64>) -> Case {
    match got {
        Err(e) if e.kind() == "domain" => Case {
            criterion,
            name,
            passed: true,
            error: None,
            tol: None,
            detail: "divergent at infinity; rejected".into(),
        },
        Err(e) => failure(criterion, name, format!("expected a domain error, got {e}")),
        Ok(v) => failure(criterion, name, format!("expected a domain error, got {v}")),
    }
}

/// `FP int_0^inf e^{-beta t} t^{-lambda} ln^n t dt` for n <= 1 via Gamma and psi.
pub fn exp_mellin_closed_form(beta: f64, lambda: f64, n: usize) -> finpart::Result<C64> {
    let s = re(1.0 - lambda);
    let base = re(beta).powc(-s) * complex_gamma(s)?;
    Ok(match n {
        0 => base,
        _ => base * (digamma(s)? - beta.ln()),
    })
}

/// Regularized limit at integer `n` of `FP int_0^inf e^{-beta t} ln(beta t) t^{-n-nu} dt`.
pub fn exp_log_integer_closed_form(beta: f64, n: usize) -> finpart::Result<f64> {
    let z = re(n as f64);
    let (psi, psi1) = (digamma(z)?.re, polygamma(1, z)?.re);
    let gamma_n: f64 = (1..n).map(|k| k as f64).product();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let lb = beta.ln();
    Ok(sign * beta.powi(n as i32 - 1) / gamma_n * (PI * PI / 6.0 - 0.5 * lb * lb + 0.5 * psi * psi - 0.5 * psi1))
}

/// The `n = 2` instance written out with Euler's constant.
pub fn exp_log_second_order(beta: f64) -> f64 {
    let (lb, g) = (beta.ln(), EULER_GAMMA);
    -beta / 12.0 * (-6.0 * lb * lb + PI * PI + 6.0 * (g - 2.0) * g + 12.0)
}

/// `FP int_0^inf sqrt((a+x)/(b+x)) ln x / x^m dx` through `2F1(1/2, m; 2; 1 - a/b)`
/// and its derivatives in the second parameter.
pub fn sqrt_ratio_log_closed_form(a: f64, b: f64, m: usize) -> finpart::Result<C64> {
    let z = re(1.0 - a / b);
    let (pa, pb, pc) = (re(0.5), re(m as f64), re(2.0));
    let f0 = gauss_2f1(pa, pb, pc, z)?;
    let f1 = gauss_2f1_db(1, pa, pb, pc, z)?;
    let f2 = gauss_2f1_db(2, pa, pb, pc, z)?;
    let lb = b.ln();
    let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign / 12.0 * (a - b) / b.powi(m as i32) * (3.0 * f2 - 6.0 * lb * f1 + (3.0 * lb * lb + PI * PI) * f0))
}

fn fpi_cases<'a>(out: &mut Vec<Thunk<'a>>, base: &'a QuadratureConfig) {
    out.push(Box::new(move || {
        let got = fpi_log(&Kernel::j0sq_recip_gamma(), re(1.0), 0, Upper::Infinite, base).map(|r| r.value);
        // absolute error: floor 1 with |want| < 1
        numeric(1, "bessel kernel lambda=1 n=0".into(), got, re(BESSEL_ANCHOR), 1e-8, 1.0)
    }));

    for beta in [0.5, 1.0, 2.0] {
        for nu in [0.3, 0.5] {
            for p in 1..=3 {
                for n in 0..=1 {
                    out.push(Box::new(move || {
                        let lambda = p as f64 + nu;
                        let name = format!("exp({beta}) lambda={lambda} log-order={n}");
                        let want = match exp_mellin_closed_form(beta, lambda, n) {
                            Ok(w) => w,
                            Err(e) => return failure(2, name, e.to_string()),
                        };
                        let k = Kernel::exponential(beta).expect("beta > 0");
                        let got = fpi_log_noninteger(&k, re(lambda), n, Upper::Infinite, base).map(|r| r.value);
                        numeric(2, name, got, want, 1e-8, 0.0)
                    }));
                }
            }
        }
    }

    let exp_log = |beta: f64, n: usize, base: &QuadratureConfig| -> finpart::Result<C64> {
        let k = Kernel::exponential(beta)?;
        let b = n as i64;
        let plain = fpi_log_integer(&k, b, 0, Upper::Infinite, base)?.value;
        let logged = fpi_log_integer(&k, b, 1, Upper::Infinite, base)?.value;
        Ok(beta.ln() * plain + logged)
    };
    for n in 1..=3 {
        for beta in [1.0, 2.0] {
            out.push(Box::new(move || {
                let name = format!("exp({beta}) ln(beta t) at integer n={n}");
                match exp_log_integer_closed_form(beta, n) {
                    Ok(w) => numeric(3, name, exp_log(beta, n, base), re(w), 1e-8, 0.0),
                    Err(e) => failure(3, name, e.to_string()),
                }
            }));
        }
    }
    for beta in [0.5, 1.0, 2.0] {
        out.push(Box::new(move || {
            let name = format!("exp({beta}) ln(beta t)/t^2 explicit form");
            numeric(3, name, exp_log(beta, 2, base), re(exp_log_second_order(beta)), 1e-8, 0.0)
        }));
    }

    out.push(Box::new(move || {
        let name = "sqrt-ratio(1.5,1) m=2 log-order=1".to_string();
        let want = match sqrt_ratio_log_closed_form(1.5, 1.0, 2) {
            Ok(w) => w,
            Err(e) => return failure(4, name, e.to_string()),
        };
        let k = Kernel::sqrt_ratio(1.5, 1.0).expect("a, b > 0");
        numeric(4, name, fpi_log_integer(&k, 2, 1, Upper::Infinite, base).map(|r| r.value), want, 1e-6, 0.0)
    }));

    for (ki, (k, upper)) in fpi_registry().into_iter().enumerate() {
        for e in grid_exponents() {
            for n in 0..=2 {
                let k6 = k.clone();
                out.push(Box::new(move || epsilon_case(ki, &k6, upper, e, n, base)));
                let k7 = k.clone();
                out.push(Box::new(move || oracle_case(ki, &k7, upper, e, n, base)));
            }
        }
    }
}

fn grid_name(ki: usize, k: &Kernel, upper: Upper, e: Exponent, n: usize) -> String {
    format!("#{ki} {} upper={} lambda={} n={n}", k.id(), upper_label(upper), e.lambda())
}

fn epsilon_case(ki: usize, k: &Kernel, upper: Upper, e: Exponent, n: usize, base: &QuadratureConfig) -> Case {
    let name = grid_name(ki, k, upper, e, n);
    if k.check_tail(upper, e.lambda()).is_err() {
        return divergent_tail_case(6, name, e.eval(k, n, upper, base));
    }
    let eps0 = default_epsilon(upper, k.rho0());
    let levels = epsilon_levels(eps0, upper, k.rho0());
    let mut vals = Vec::with_capacity(3);
    for eps in levels {
        let cfg = QuadratureConfig { epsilon: Some(eps), ..base.clone() };
        match e.eval(k, n, upper, &cfg) {
            Ok(v) => vals.push(v),
            Err(err) => return failure(6, name, format!("eps={eps}: {err}")),
        }
    }
    let err = vals.iter().map(|v| scaled_error(*v, vals[1], 1.0)).fold(0.0, f64::max);
    let tol = 1e-9;
    Case {
        criterion: 6,
        name,
        passed: err < tol,
        error: Some(err),
        tol: Some(tol),
        detail: format!("eps = {levels:?}"),
    }
}

fn oracle_case(ki: usize, k: &Kernel, upper: Upper, e: Exponent, n: usize, base: &QuadratureConfig) -> Case {
    let name = grid_name(ki, k, upper, e, n);
    if k.check_tail(upper, e.lambda()).is_err() {
        return divergent_tail_case(7, name, fpi_epsilon_oracle(k, re(e.lambda()), n, upper, base).map(|r| r.value));
    }
    let contour = match e.eval(k, n, upper, base) {
        Ok(v) => v,
        Err(err) => return failure(7, name, format!("contour: {err}")),
    };
    let got = fpi_epsilon_oracle(k, re(e.lambda()), n, upper, base).map(|r| r.value);
    numeric(7, name, got, contour, 1e-7, 1.0)
}

/// Polynomial in `(lambda - at)` with Taylor coefficients `c`.
#[derive(Debug, Clone)]
pub struct Shifted {
    pub at: C64,
    pub c: Vec<C64>,
}

impl Shifted {
    pub fn eval(&self, lam: C64) -> C64 {
        let x = lam - self.at;
        self.c.iter().rev().fold(re(0.0), |acc, a| acc * x + a)
    }

    pub fn oracle(&self, max_order: usize) -> DerivativeOracle {
        let mut fact = 1.0;
        let d = (0..=max_order)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                self.c.get(k).copied().unwrap_or(re(0.0)) * fact
            })
            .collect();
        DerivativeOracle::from_values(self.at, d)
    }
}

/// Manufactured pair: `f(at) = 1 + c` and `g = (lambda - at)^n u` with `u(at) = 1`.
pub fn manufactured_pair(rng: &mut ChaCha8Rng, n: usize) -> (Shifted, Shifted) {
    let mut coeff = || C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let at = C64::new(2.0 * coeff().re, 2.0 * coeff().im);
    let mut fc: Vec<C64> = (0..=2 * n).map(|_| coeff()).collect();
    fc[0] += 1.0;
    let mut gc = vec![re(0.0); n];
    gc.push(re(1.0));
    gc.extend((0..=n).map(|_| coeff()));
    (Shifted { at, c: fc }, Shifted { at, c: gc })
}

/// Every regularized-limit route on `f/g`, with the method tag.
fn all_methods(
    f: &DerivativeOracle,
    g: &DerivativeOracle,
    n: usize,
    w: impl Fn(C64) -> C64,
    rho: f64,
) -> Vec<(&'static str, finpart::Result<C64>)> {
    let mut v = vec![
        ("partition-form", reglim_ratio(f, g, n).map(|r| r.value)),
        ("composition-form", reglim_ratio_compositions(f, g, n).map(|r| r.value)),
        ("contour-oracle", reglim_contour_oracle(w, f.point(), rho, ORACLE_GRID, ORACLE_TOL).map(|r| r.value)),
    ];
    if n <= 4 {
        v.push(("corollary", reglim_corollary(n, f, g).map(|r| r.value)));
    }
    v
}

fn agreement(
    criterion: u8,
    name: String,
    values: Vec<(&'static str, finpart::Result<C64>)>,
    want: Option<C64>,
    tol: f64,
) -> Case {
    let mut got = Vec::with_capacity(values.len());
    for (tag, v) in values {
        match v {
            Ok(x) => got.push(x),
            Err(e) => return failure(criterion, name, format!("{tag}: {e}")),
        }
    }
    let reference = want.unwrap_or(got[0]);
    let err = got.iter().map(|v| scaled_error(*v, reference, 1.0)).fold(0.0, f64::max);
    Case { criterion, name, passed: err <= tol, error: Some(err), tol: Some(tol), detail: String::new() }
}

fn reglim_cases(out: &mut Vec<Thunk>) {
    let mut rng = ChaCha8Rng::seed_from_u64(REGLIM_SEED);
    for n in 1..=4 {
        for i in 0..REGLIM_CASES_PER_ORDER {
            let (f, g) = manufactured_pair(&mut rng, n);
            out.push(Box::new(move || {
                let (fo, go) = (f.oracle(2 * n), g.oracle(2 * n));
                let values = all_methods(&fo, &go, n, |l| f.eval(l) / g.eval(l), 0.2);
                agreement(8, format!("manufactured n={n} #{i}"), values, None, 1e-10)
            }));
        }
    }
    out.push(Box::new(|| {
        let f = DerivativeOracle::from_values(re(0.0), [1.0, 0.0, -1.0, 0.0, 1.0].map(re).to_vec());
        let g = DerivativeOracle::from_values(re(0.0), [0.0, 0.0, 2.0, 0.0, -8.0].map(re).to_vec());
        let values = all_methods(&f, &g, 2, |l| l.cos() / l.sin().powi(2), 0.5);
        agreement(8, "cos/sin^2 at 0".into(), values, Some(re(-1.0 / 6.0)), 1e-10)
    }));

    let points = [C64::new(2.0, 1.0), C64::new(0.7, -0.4), C64::new(-1.5, 0.2)];
    for z in points {
        for lam in [C64::new(1.3, 0.0), C64::new(2.7, 0.0), C64::new(0.45, 0.2)] {
            out.push(Box::new(move || {
                let lz = BranchedLog::cut(z);
                let name = format!("derivatives of f(lambda) at lambda={lam} z={z}");
                let d = match cauchy_derivatives(
                    &|l| fn_lambda_derivative(0, l, &lz).unwrap_or(re(f64::NAN)),
                    lam,
                    0.15,
                    4,
                ) {
                    Ok(d) => d,
                    Err(e) => return failure(11, name, e.to_string()),
                };
                let mut err: f64 = 0.0;
                for (n, dn) in d.iter().enumerate() {
                    match fn_lambda_derivative(n, lam, &lz) {
                        Ok(v) => err = err.max(scaled_error(v, *dn, 1.0)),
                        Err(e) => return failure(11, name, e.to_string()),
                    }
                }
                Case {
                    criterion: 11,
                    name,
                    passed: err <= 1e-9,
                    error: Some(err),
                    tol: Some(1e-9),
                    detail: String::new(),
                }
            }));
        }
        for b in 1..=3 {
            out.push(Box::new(move || {
                let lz = BranchedLog::cut(z);
                let name = format!("regularized derivatives at b={b} z={z}");
                let mut err: f64 = 0.0;
                for n in 0..=4 {
                    let oracle = reglim_contour_oracle(
                        |l| fn_lambda_derivative(n, l, &lz).unwrap_or(re(f64::NAN)),
                        re(b as f64),
                        0.3,
                        ORACLE_GRID,
                        ORACLE_TOL,
                    );
                    match oracle {
                        Ok(o) => err = err.max(scaled_error(fn_lambda_reglim(n, b, &lz), o.value, 1.0)),
                        Err(e) => return failure(11, name, format!("n={n}: {e}")),
                    }
                }
                Case {
                    criterion: 11,
                    name,
                    passed: err <= 1e-9,
                    error: Some(err),
                    tol: Some(1e-9),
                    detail: String::new(),
                }
            }));
        }
    }

    // ln z - pi i; ln^2 z/2 - pi i ln z - pi^2/3; ln^3 z/3 - pi i ln^2 z - (2 pi^2/3) ln z,
    // stored as q_j with the factor (pi i)^{n+1-j} split off
    let r = |p: i64, q: i64| Rational::new(BigInt::from(p), BigInt::from(q));
    let expected =
        [vec![r(-1, 1), r(1, 1)], vec![r(1, 3), r(-1, 1), r(1, 2)], vec![r(0, 1), r(2, 3), r(-1, 1), r(1, 3)]];
    for (n, want) in expected.into_iter().enumerate() {
        out.push(Box::new(move || {
            let got = integer_case_log_polynomial(n);
            let passed = got == want;
            let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
            Case {
                criterion: 11,
                name: format!("integer-case kernel coefficients n={n}"),
                passed,
                error: None,
                tol: None,
                detail: if passed { String::new() } else { format!("got [{}], want [{}]", show(&got), show(&want)) },
            }
        }));
    }
}

fn stieltjes_config(base: &QuadratureConfig) -> StieltjesConfig {
    StieltjesConfig { quad: base.clone(), ..StieltjesConfig::default() }
}

fn stieltjes_cases<'a>(out: &mut Vec<Thunk<'a>>, base: &'a QuadratureConfig) {
    let kernels = [("const", Kernel::constant()), ("exp(1)", Kernel::exponential(1.0).expect("beta > 0"))];
    for (label, k) in kernels {
        for nu in [0.0, 0.3, 0.7] {
            for n in 0..=2 {
                for w in [0.05, 0.1, 0.2] {
                    let k = k.clone();
                    out.push(Box::new(move || {
                        let name = format!("{label} nu={nu} n={n} omega={w}");
                        let cfg = stieltjes_config(base);
                        let p = match StieltjesProblem::new(k.clone(), nu, n, re(w), Upper::Infinite) {
                            Ok(p) => p,
                            Err(e) => return failure(9, name, e.to_string()),
                        };
                        let oracle = match stieltjes_direct_oracle(&p, &cfg.quad) {
                            Ok(o) => o.value,
                            Err(e) => return failure(9, name, format!("oracle: {e}")),
                        };
                        numeric(9, name, stieltjes_series(&p, &cfg).map(|r| r.value), oracle, 1e-6, 0.0)
                    }));
                }
            }
        }
    }
    for w in [0.05, 0.1, 0.2] {
        out.push(Box::new(move || {
            let name = format!("const on (0,1) nu=0 n=0 omega={w} arctan form");
            let got = StieltjesProblem::new(Kernel::constant(), 0.0, 0, re(w), Upper::Finite(1.0))
                .and_then(|p| stieltjes_series(&p, &stieltjes_config(base)))
                .map(|r| r.value);
            numeric(9, name, got, re((1.0 / w).atan() / w), 1e-10, 0.0)
        }));
    }

    for (nu, n) in [(0.3, 1), (0.0, 2)] {
        out.push(Box::new(move || {
            let name = format!("exp(1) nu={nu} n={n} leading term");
            let cfg = stieltjes_config(base);
            let mut devs = Vec::with_capacity(3);
            for w in [1e-1, 1e-2, 1e-3] {
                let dev =
                    StieltjesProblem::new(Kernel::exponential(1.0).expect("beta > 0"), nu, n, re(w), Upper::Infinite)
                        .and_then(|p| Ok((stieltjes_series(&p, &cfg)?.value, stieltjes_leading_asymptotic(&p)?)))
                        .map(|(full, lead)| (full / lead - 1.0).norm());
                match dev {
                    Ok(d) => devs.push(d),
                    Err(e) => return failure(10, name, format!("omega={w}: {e}")),
                }
            }
            let monotone = devs.windows(2).all(|p| p[1] < p[0]);
            let last = devs[2];
            Case {
                criterion: 10,
                name,
                passed: monotone && last < 0.01,
                error: Some(last),
                tol: Some(0.01),
                detail: format!("|full/leading - 1| at omega = 1e-1, 1e-2, 1e-3: {devs:?}"),
            }
        }));
    }
}
