//! Generalized Stieltjes transform `int_0^a k(t) ln^n t / (t^nu (omega^2 + t^2)) dt`.
//!
//! For `|omega| < min(a, rho0)` the transform equals a convergent series of
//! finite-part integrals `FP int_0^a k(t) ln^n t / t^{nu+2k+2} dt` plus two
//! residue terms built from `k(+-i omega)`. The residue terms carry the whole
//! small-`omega` singularity.

use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::ToPrimitive;

use crate::combinatorics::{bernoulli_f64, binomial_f64, euler_number, factorial_f64};
use crate::contour::{fpi_log_integer, fpi_log_shifted, FpiResult, Kernel, QuadratureConfig, Upper};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::quadrature::{adaptive_gauss, tanh_sinh, EvalBudget, QuadOutput, Tolerance};
use crate::specialfun::{csc_derivative, sec_derivative};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 60;
/// Consecutive non-decreasing terms that count as divergence.
const GROWTH_STREAK: usize = 4;
/// Terms evaluated per parallel batch.
const BATCH: usize = 8;

#[derive(Debug, Clone)]
pub struct StieltjesProblem {
    pub kernel: Kernel,
    pub nu: f64,
    pub n: usize,
    pub omega: C64,
    pub upper: Upper,
}

impl StieltjesProblem {
    pub fn new(kernel: Kernel, nu: f64, n: usize, omega: C64, upper: Upper) -> Result<Self> {
        let p = Self { kernel, nu, n, omega, upper };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.nu) {
            return Err(Error::Domain(format!("nu must lie in [0, 1), got {}", self.nu)));
        }
        check_omega(self.omega)?;
        if !(self.upper.value() > 0.0) {
            return Err(Error::Domain("upper limit must be positive".into()));
        }
        // the transform decays like k(t) t^{-nu-2}
        self.kernel.check_tail(self.upper, self.nu + 2.0)?;
        if self.kernel.taylor(0).norm() == 0.0 {
            return Err(Error::Domain("kernel must not vanish at the origin".into()));
        }
        Ok(())
    }

    /// Radius of convergence of the finite-part series.
    pub fn radius(&self) -> f64 {
        self.upper.value().min(self.kernel.rho0())
    }
}

/// `omega != 0` with `|Arg omega| != pi/2`.
fn check_omega(omega: C64) -> Result<()> {
    if !(omega.re.is_finite() && omega.im.is_finite()) || omega.norm() == 0.0 {
        return Err(Error::Domain("omega must be finite and nonzero".into()));
    }
    if omega.re == 0.0 {
        return Err(Error::Domain("omega must not lie on the imaginary axis".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDiagnostics {
    pub terms: usize,
    pub last_term: f64,
    /// `|t_K / t_{K-1}|` over the last two nonzero terms; zero when fewer exist.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesResult {
    pub value: C64,
    pub est_error: f64,
    pub series: SeriesDiagnostics,
    pub leading_term: C64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesConfig {
    pub quad: QuadratureConfig,
    /// Stop once `|term| <= series_rel_tol * |current value|`.
    pub series_rel_tol: f64,
    pub max_terms: usize,
}

impl Default for StieltjesConfig {
    fn default() -> Self {
        Self { quad: QuadratureConfig::default(), series_rel_tol: 1e-13, max_terms: MAX_SERIES_TERMS }
    }
}

fn binomial_log_sum(n: usize, log_omega: C64, deriv: impl Fn(usize) -> Result<C64>) -> Result<C64> {
    let mut s = C64::new(0.0, 0.0);
    for j in 0..=n {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binomial_f64(n, j) * log_omega.powi((n - j) as i32) * deriv(j)?;
    }
    Ok(s)
}

fn check_nu_open(nu: f64) -> Result<()> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::Domain(format!("nu must lie in (0, 1), got {nu}; use the nu = 0 variant")));
    }
    Ok(())
}

/// `pi/(2 omega^{nu+1}) sum_j (-1)^j C(n,j) Log^{n-j} omega sec^{(j)}(nu)`.
pub fn delta_n1(nu: f64, omega: C64, n: usize) -> Result<C64> {
    check_nu_open(nu)?;
    check_omega(omega)?;
    let lw = omega.ln();
    let s = binomial_log_sum(n, lw, |j| sec_derivative(j, C64::new(nu, 0.0)))?;
    Ok(FRAC_PI_2 * (-(nu + 1.0) * lw).exp() * s)
}

/// As [`delta_n1`] with `csc` in place of `sec`.
pub fn delta_n2(nu: f64, omega: C64, n: usize) -> Result<C64> {
    check_nu_open(nu)?;
    check_omega(omega)?;
    let lw = omega.ln();
    let s = binomial_log_sum(n, lw, |j| csc_derivative(j, C64::new(nu, 0.0)))?;
    Ok(FRAC_PI_2 * (-(nu + 1.0) * lw).exp() * s)
}

/// `nu = 0` limit of [`delta_n1`]: an Euler-number sum.
pub fn delta_n1_nu0(omega: C64, n: usize) -> Result<C64> {
    check_omega(omega)?;
    let lw = omega.ln();
    let mut s = C64::new(0.0, 0.0);
    for j in 0..=n / 2 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let e = euler_number(2 * j).to_f64().unwrap_or(f64::INFINITY);
        let c = sign / (factorial_f64(n - 2 * j) * factorial_f64(2 * j)) * FRAC_PI_2.powi(2 * j as i32 + 1) * e;
        s += c * lw.powi((n - 2 * j) as i32);
    }
    Ok(factorial_f64(n) * s / omega)
}

/// Regularized `nu -> 0` limit of [`delta_n2`]: a log power plus a
/// Bernoulli-number sum.
pub fn delta_n2_nu0(omega: C64, n: usize) -> Result<C64> {
    check_omega(omega)?;
    let lw = omega.ln();
    let mut s = C64::new(0.0, 0.0);
    for j in 1..=n.div_ceil(2) {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * (2f64.powi(2 * j as i32) - 2.0) / (factorial_f64(n + 1 - 2 * j) * factorial_f64(2 * j))
            * FRAC_PI_2.powi(2 * j as i32)
            * bernoulli_f64(2 * j);
        s += c * lw.powi((n + 1 - 2 * j) as i32);
    }
    Ok(-lw.powi(n as i32 + 1) / (omega * (n as f64 + 1.0)) + factorial_f64(n) * s / omega)
}

fn deltas(nu: f64, omega: C64, n: usize) -> Result<(C64, C64)> {
    if nu == 0.0 {
        Ok((delta_n1_nu0(omega, n)?, delta_n2_nu0(omega, n)?))
    } else {
        Ok((delta_n1(nu, omega, n)?, delta_n2(nu, omega, n)?))
    }
}

/// `k(0) Delta_{n1}`: the leading behaviour as `omega -> 0`.
pub fn stieltjes_leading_asymptotic(problem: &StieltjesProblem) -> Result<C64> {
    problem.validate()?;
    Ok(problem.kernel.taylor(0) * deltas(problem.nu, problem.omega, problem.n)?.0)
}

/// Circle radius for the series terms. The finite-part values do not depend
/// on it; a radius close to `min(a, rho0)` limits cancellation between the
/// circle and the legs at large exponents.
fn series_epsilon(problem: &StieltjesProblem) -> f64 {
    1f64.min(0.75 * problem.radius())
}

fn series_term(problem: &StieltjesProblem, k: usize, cfg: &QuadratureConfig) -> Result<(C64, FpiResult)> {
    let w2k = (problem.omega * problem.omega).powi(k as i32);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let fpi = if problem.nu == 0.0 {
        fpi_log_integer(&problem.kernel, 2 * k as i64 + 2, problem.n, problem.upper, cfg)?
    } else {
        fpi_log_shifted(&problem.kernel, 2 * k as i64 + 2, C64::new(problem.nu, 0.0), problem.n, problem.upper, cfg)?
    };
    Ok((sign * w2k * fpi.value, fpi))
}

/// Evaluates the transform through the finite-part series for `0 <= nu < 1`.
///
/// Terms are computed in batches and reduced in ascending `k`; the stopping
/// index is decided sequentially so the result does not depend on the
/// execution mode.
pub fn stieltjes_series(problem: &StieltjesProblem, cfg: &StieltjesConfig) -> Result<StieltjesResult> {
    problem.validate()?;
    let radius = problem.radius();
    if problem.omega.norm() >= radius {
        return Err(Error::Divergence(format!(
            "|omega| = {} is not below min(a, rho0) = {radius}; the series diverges",
            problem.omega.norm()
        )));
    }
    let (d1, d2) = deltas(problem.nu, problem.omega, problem.n)?;
    let kp = problem.kernel.eval(I * problem.omega);
    let km = problem.kernel.eval(-I * problem.omega);
    let residue = 0.5 * (kp + km) * d1 - 0.5 * I * (kp - km) * d2;
    let leading = problem.kernel.taylor(0) * d1;

    let mut qcfg = cfg.quad.clone();
    qcfg.epsilon = Some(cfg.quad.epsilon.unwrap_or_else(|| series_epsilon(problem)));
    let mode = qcfg.execution;
    let batch = if mode.is_parallel() { BATCH } else { 1 };
    let inner = QuadratureConfig { execution: Execution::Sequential, ..qcfg.clone() };
    let budget = EvalBudget::new(cfg.quad.max_evals);

    let mut partial = C64::new(0.0, 0.0);
    let mut est_error = 0.0;
    let mut prev: Option<f64> = None;
    let mut ratio = 0.0;
    let mut streak = 0;
    let mut k = 0;
    while k < cfg.max_terms {
        let count = batch.min(cfg.max_terms - k);
        let start = k;
        let terms = par::try_map_indexed(mode, count, |i| {
            let base = if count > 1 { &inner } else { &qcfg };
            // A term only needs absolute accuracy relative to the final sum.
            let weight = problem.omega.norm().powi(2 * (start + i) as i32);
            let abs_tol = base.abs_tol.max(0.01 * cfg.series_rel_tol * residue.norm() / weight);
            series_term(problem, start + i, &QuadratureConfig { abs_tol, ..base.clone() })
        })?;
        for (term, fpi) in terms {
            budget.charge(fpi.diagnostics.evaluations)?;
            partial += term;
            let scale = problem.omega.norm().powi(2 * k as i32);
            est_error += scale * fpi.est_error;
            let mag = term.norm();
            if let Some(p) = prev {
                if p > 0.0 && mag > 0.0 {
                    ratio = mag / p;
                    streak = if ratio >= 1.0 { streak + 1 } else { 0 };
                }
            }
            if mag > 0.0 {
                prev = Some(mag);
            }
            k += 1;
            if streak >= GROWTH_STREAK {
                return Err(Error::Divergence(format!("series terms grow with ratio {ratio:.3e} after {k} terms")));
            }
            // relative to the value itself: partial and residue may cancel
            let target = cfg.series_rel_tol * (partial + residue).norm();
            if mag <= target && k >= 2 {
                let value = partial + residue;
                return Ok(StieltjesResult {
                    value,
                    est_error: est_error + mag,
                    series: SeriesDiagnostics { terms: k, last_term: mag, ratio },
                    leading_term: leading,
                    evaluations: budget.used(),
                });
            }
        }
    }
    Err(Error::Divergence(format!("series did not converge within {} terms (ratio {ratio:.3e})", cfg.max_terms)))
}

/// Series evaluation for `0 < nu < 1`.
pub fn stieltjes_log(problem: &StieltjesProblem, cfg: &StieltjesConfig) -> Result<StieltjesResult> {
    check_nu_open(problem.nu)?;
    stieltjes_series(problem, cfg)
}

/// Series evaluation for `nu = 0`, where every exponent is an integer.
pub fn stieltjes_log_nu0(problem: &StieltjesProblem, cfg: &StieltjesConfig) -> Result<StieltjesResult> {
    if problem.nu != 0.0 {
        return Err(Error::Domain(format!("expected nu = 0, got {}", problem.nu)));
    }
    stieltjes_series(problem, cfg)
}

/// Direct quadrature of the defining integral along the real axis.
///
/// `[0, min(|omega|, a)]` uses tanh-sinh for the `t^{-nu} ln^n t` endpoint,
/// the remainder uses geometric Gauss panels, and an algebraically decaying
/// kernel on `[|omega|, inf)` is mapped onto `(0, 1]`.
pub fn stieltjes_direct_oracle(problem: &StieltjesProblem, cfg: &QuadratureConfig) -> Result<QuadOutput> {
    problem.validate()?;
    let budget = cfg.budget();
    let tol = cfg.tolerance();
    let w2 = problem.omega * problem.omega;
    let (nu, n) = (problem.nu, problem.n as i32);
    let f = |t: f64| -> C64 {
        if t <= 0.0 {
            return C64::new(0.0, 0.0);
        }
        let v = problem.kernel.eval(C64::new(t, 0.0)) * t.ln().powi(n) * t.powf(-nu) / (w2 + t * t);
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let a = problem.upper.value();
    let split = problem.omega.norm().min(a);
    let head = tanh_sinh(|x, _, _| f(x), 0.0, split, tol, 12, &budget)?;
    let tail_end = match problem.upper {
        Upper::Finite(a) => Some(a),
        Upper::Infinite => problem.kernel.tail_truncation(),
    };
    let tail = match tail_end {
        Some(end) if end <= split => QuadOutput { value: C64::new(0.0, 0.0), error: 0.0, evals: 0 },
        Some(end) => geometric_panels(&f, split, end, tol, cfg.max_refinements, &budget)?,
        None => tanh_sinh(
            |_, u, _| {
                let v = f(split / u) * (split / (u * u));
                if v.re.is_finite() && v.im.is_finite() {
                    v
                } else {
                    C64::new(0.0, 0.0)
                }
            },
            0.0,
            1.0,
            tol,
            12,
            &budget,
        )?,
    };
    Ok(QuadOutput { value: head.value + tail.value, error: head.error + tail.error, evals: budget.used() })
}

fn geometric_panels(
    f: &(dyn Fn(f64) -> C64 + Sync),
    lo: f64,
    hi: f64,
    tol: Tolerance,
    max_panels: usize,
    budget: &EvalBudget,
) -> Result<QuadOutput> {
    let panels = ((hi / lo).log2().ceil().max(1.0) as usize).min(64);
    let mut out = QuadOutput { value: C64::new(0.0, 0.0), error: 0.0, evals: 0 };
    for i in 0..panels {
        let x0 = lo * (hi / lo).powf(i as f64 / panels as f64);
        let x1 = if i + 1 == panels { hi } else { lo * (hi / lo).powf((i + 1) as f64 / panels as f64) };
        let p = adaptive_gauss(f, x0, x1, Tolerance::new(tol.abs / panels as f64, tol.rel), 1, max_panels, budget)?;
        out.value += p.value;
        out.error += p.error;
        out.evals += p.evals;
    }
    Ok(out)
}

/// `pi/(2 omega^{nu+1}) sec(pi nu/2)`: the transform of `k = 1` over `(0, inf)`.
pub fn lorentzian_power(nu: f64, omega: C64) -> C64 {
    PI / 2.0 * (-(nu + 1.0) * omega.ln()).exp() / (FRAC_PI_2 * nu).cos()
}
