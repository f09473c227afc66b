use std::f64::consts::TAU;

use crate::combinatorics::{binomial_f64, factorial_f64, rational_to_f64, stirling_second, Rational};
use crate::error::{Error, Result};
use crate::par;
use crate::quadrature::EvalBudget;
use crate::C64;

use super::fn_lambda::{integer_case_coefficients, is_integer};
use super::kernel::Kernel;
use super::keyhole::{keyhole_with_budget, KeyholeContour, QuadratureConfig, Upper};

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FpiDiagnostics {
    pub method: &'static str,
    pub epsilon: f64,
    pub tail: Option<f64>,
    pub evaluations: u64,
    /// Number of contour integrals (or epsilon levels) combined.
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FpiResult {
    pub value: C64,
    pub est_error: f64,
    pub diagnostics: FpiDiagnostics,
}

/// `beta_j(lambda) = sum_{l=0}^{n-j} (-1)^l l! S(n-j, l) e^{-2 pi i lambda l} / (e^{-2 pi i lambda} - 1)^{l+1}`.
pub fn beta_coefficients(n: usize, lambda: C64) -> Result<Vec<C64>> {
    if is_integer(lambda) {
        return Err(Error::Singular(format!(
            "beta coefficients are singular at the integer {}; use the integer evaluator",
            lambda.re
        )));
    }
    beta_from_fraction(n, lambda)
}

/// `beta_j` depends on `lambda` only modulo 1; `frac` is that residue. The
/// denominator `e^w - 1 = 2 sinh(w/2) e^{w/2}` keeps full relative accuracy
/// as `frac -> 0`.
fn beta_from_fraction(n: usize, frac: C64) -> Result<Vec<C64>> {
    let w = -TAU * I * frac;
    let e = w.exp();
    let d = 1.0 / (2.0 * (w / 2.0).sinh() * (w / 2.0).exp());
    (0..=n)
        .map(|j| {
            let mut s = C64::new(0.0, 0.0);
            for l in 0..=n - j {
                let st = rational_to_f64(&Rational::from(stirling_second(n - j, l)?));
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * factorial_f64(l) * st * e.powi(l as i32) * d.powi(l as i32 + 1);
            }
            Ok(s)
        })
        .collect()
}

/// `sum_j coeffs[j] * contour_integral(k(z) z^{-lambda} ln^j z)`, one keyhole
/// integral per `j`, reduced in ascending `j`.
fn combine(
    kernel: &Kernel,
    shift: i64,
    frac: C64,
    coeffs: &[C64],
    contour: &KeyholeContour,
    cfg: &QuadratureConfig,
    method: &'static str,
) -> Result<FpiResult> {
    let budget = cfg.budget();
    let parts = par::try_map_indexed(cfg.execution, coeffs.len(), |j| {
        if coeffs[j] == C64::new(0.0, 0.0) {
            return Ok(None);
        }
        // z^{-shift} is single valued, so only the fractional power needs the branch.
        let integrand = |z: C64, lz: &crate::specialfun::BranchedLog| {
            kernel.eval(z) * z.powi(-(shift as i32)) * lz.pow(-frac) * lz.powi(j)
        };
        keyhole_with_budget(&integrand, contour, cfg, &budget).map(Some)
    })?;
    let mut value = C64::new(0.0, 0.0);
    let mut est_error = 0.0;
    for (c, p) in coeffs.iter().zip(&parts) {
        if let Some(p) = p {
            value += c * p.value;
            est_error += c.norm() * p.est_error;
        }
    }
    finish(value, est_error, contour, &budget, method, coeffs.len())
}

fn finish(
    value: C64,
    est_error: f64,
    contour: &KeyholeContour,
    budget: &EvalBudget,
    method: &'static str,
    terms: usize,
) -> Result<FpiResult> {
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range("finite-part value is not finite".into()));
    }
    Ok(FpiResult {
        value,
        est_error,
        diagnostics: FpiDiagnostics {
            method,
            epsilon: contour.epsilon,
            tail: contour.tail,
            evaluations: budget.used(),
            terms,
        },
    })
}

/// Finite-part integral of `k(t) ln^n t / t^lambda` over `(0, a)` for
/// non-integer `lambda`.
pub fn fpi_log_noninteger(
    kernel: &Kernel,
    lambda: C64,
    n: usize,
    upper: Upper,
    cfg: &QuadratureConfig,
) -> Result<FpiResult> {
    if is_integer(lambda) {
        return Err(Error::Domain(format!("lambda = {} is an integer; use fpi_log_integer", lambda.re)));
    }
    fpi_log_shifted(kernel, 0, lambda, n, upper, cfg)
}

/// As [`fpi_log_noninteger`] with `lambda = shift + frac` held exactly, which
/// keeps the pole structure accurate when `lambda` is close to an integer.
pub fn fpi_log_shifted(
    kernel: &Kernel,
    shift: i64,
    frac: C64,
    n: usize,
    upper: Upper,
    cfg: &QuadratureConfig,
) -> Result<FpiResult> {
    if is_integer(frac) {
        return Err(Error::Domain("fractional exponent part must not be an integer".into()));
    }
    if shift.unsigned_abs() > i32::MAX as u64 {
        return Err(Error::Domain("integer exponent shift out of range".into()));
    }
    kernel.check_tail(upper, shift as f64 + frac.re)?;
    let beta = beta_from_fraction(n, frac)?;
    let coeffs: Vec<C64> = (0..=n).map(|j| binomial_f64(n, j) * (TAU * I).powi((n - j) as i32) * beta[j]).collect();
    let contour = KeyholeContour::for_integrand(kernel, upper, cfg.epsilon, shift as f64 + frac.re)?;
    combine(kernel, shift, frac, &coeffs, &contour, cfg, "contour-noninteger")
}

/// Finite-part integral of `k(t) ln^n t / t^b` over `(0, a)` for integer `b`.
pub fn fpi_log_integer(kernel: &Kernel, b: i64, n: usize, upper: Upper, cfg: &QuadratureConfig) -> Result<FpiResult> {
    kernel.check_tail(upper, b as f64)?;
    let coeffs = integer_case_coefficients(n);
    let contour = KeyholeContour::for_integrand(kernel, upper, cfg.epsilon, b as f64)?;
    if b.unsigned_abs() > i32::MAX as u64 {
        return Err(Error::Domain("integer exponent out of range".into()));
    }
    combine(kernel, b, C64::new(0.0, 0.0), &coeffs, &contour, cfg, "contour-integer")
}

/// Dispatches on whether `lambda` is an integer.
pub fn fpi_log(kernel: &Kernel, lambda: C64, n: usize, upper: Upper, cfg: &QuadratureConfig) -> Result<FpiResult> {
    if is_integer(lambda) {
        if lambda.re.abs() > 1e15 {
            return Err(Error::Domain("integer exponent out of range".into()));
        }
        fpi_log_integer(kernel, lambda.re as i64, n, upper, cfg)
    } else {
        fpi_log_noninteger(kernel, lambda, n, upper, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfun::{complex_gamma, digamma, polygamma, EULER_GAMMA};
    use std::f64::consts::PI;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn beta_low_orders() {
        let lam = re(1.3);
        let e = (-TAU * I * lam).exp();
        let b0 = beta_coefficients(0, lam).unwrap();
        assert!((b0[0] - 1.0 / (e - 1.0)).norm() < 1e-15);
        let b1 = beta_coefficients(1, lam).unwrap();
        assert!((b1[1] - 1.0 / (e - 1.0)).norm() < 1e-15);
        let t = TAU * I * b1[0];
        assert!((t + TAU * I * e / (e - 1.0).powi(2)).norm() < 1e-14);
        let b2 = beta_coefficients(2, lam).unwrap();
        // (2 pi i)^2 beta_0 = -4 pi^2 e (e + 1) / (e - 1)^3
        let lhs = (TAU * I).powi(2) * b2[0];
        let rhs = -4.0 * PI * PI * e * (e + 1.0) / (e - 1.0).powi(3);
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
        assert!(beta_coefficients(1, re(2.0)).is_err());
    }

    #[test]
    fn exponential_kernel_closed_forms() {
        let cfg = QuadratureConfig::default();
        let k = Kernel::exponential(1.0).unwrap();
        let g = complex_gamma(re(-0.5)).unwrap();
        let v0 = fpi_log_noninteger(&k, re(1.5), 0, Upper::Infinite, &cfg).unwrap();
        assert!(rel(v0.value, g) < 1e-11);
        let v1 = fpi_log_noninteger(&k, re(1.5), 1, Upper::Infinite, &cfg).unwrap();
        let want = g * digamma(re(-0.5)).unwrap();
        assert!(rel(v1.value, want) < 1e-10);
        let conv = fpi_log_noninteger(&k, re(0.5), 0, Upper::Infinite, &cfg).unwrap();
        assert!(rel(conv.value, re(PI.sqrt())) < 1e-11);
    }

    #[test]
    fn integer_closed_forms() {
        let cfg = QuadratureConfig::default();
        let k = Kernel::exponential(1.0).unwrap();
        let v = fpi_log_integer(&k, 1, 1, Upper::Infinite, &cfg).unwrap();
        let want = PI * PI / 12.0 + EULER_GAMMA * EULER_GAMMA / 2.0;
        assert!((v.value.re - want).abs() < 1e-10 * want);
        assert!(v.value.im.abs() <= 10.0 * v.est_error + 1e-14);
        let v = fpi_log_integer(&k, 2, 1, Upper::Infinite, &cfg).unwrap();
        let g = EULER_GAMMA;
        let want = -(PI * PI + 6.0 * (g - 2.0) * g + 12.0) / 12.0;
        assert!((v.value.re - want).abs() < 1e-10 * want.abs());
        let _ = polygamma(1, re(1.0));
    }
}
