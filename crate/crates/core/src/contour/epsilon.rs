//! The epsilon-subtraction definition of the finite part, used as an
//! independent oracle for the contour evaluators.

use crate::combinatorics::{binomial_f64, factorial_f64};
use crate::error::{Error, Result};
use crate::specialfun::BranchedLog;
use crate::C64;

use super::fpi::{FpiDiagnostics, FpiResult};
use super::kernel::Kernel;
use super::keyhole::{default_epsilon, real_leg, KeyholeContour, QuadratureConfig, Upper};

/// Number of halvings of epsilon examined by [`fpi_epsilon_oracle`].
pub const EPSILON_LEVELS: usize = 4;
/// Maximum relative spread across epsilon levels before giving up.
pub const EPSILON_SPREAD_TOL: f64 = 1e-8;

/// `(-1)^n d^n/dlambda^n [eps^{c-lambda} / (lambda - c)]` with `c = l + 1`,
/// i.e. `sum_m C(n,m) ln^m eps (n-m)! eps^{c-lambda} / (lambda-c)^{n-m+1}`.
/// At the collision `lambda = c` the logarithmic term `-ln^{n+1} eps/(n+1)` replaces it.
fn power_log_term(l: usize, lambda: C64, n: usize, eps: f64) -> C64 {
    let c = (l + 1) as f64;
    let le = eps.ln();
    if lambda.im == 0.0 && lambda.re == c {
        return C64::new(-le.powi(n as i32 + 1) / (n + 1) as f64, 0.0);
    }
    let d = lambda - c;
    let p = (C64::new(c, 0.0) - lambda) * le;
    let base = p.exp();
    let mut s = C64::new(0.0, 0.0);
    for m in 0..=n {
        s += binomial_f64(n, m) * le.powi(m as i32) * factorial_f64(n - m) / d.powi((n - m + 1) as i32);
    }
    s * base
}

/// Divergent part `sum_{l <= Re lambda - 1} a_l (-1)^n d^n/dlambda^n [eps^{l-lambda+1}/(lambda-l-1)]`.
pub fn divergent_part(kernel: &Kernel, lambda: C64, n: usize, eps: f64) -> Result<C64> {
    if lambda.re < 1.0 {
        return Err(Error::Domain("divergent part needs Re lambda >= 1".into()));
    }
    if !(eps > 0.0 && eps < kernel.rho0()) {
        return Err(Error::Domain("epsilon must lie in (0, rho0)".into()));
    }
    let top = (lambda.re - 1.0).floor() as usize;
    Ok((0..=top).map(|l| kernel.taylor(l) * power_log_term(l, lambda, n, eps)).sum())
}

/// Full subtraction series over every tabulated Taylor coefficient: the
/// exact value of `int_eps^a - FP int_0^a` for `eps < rho0`.
pub fn subtraction_series(kernel: &Kernel, lambda: C64, n: usize, eps: f64) -> C64 {
    (0..kernel.taylor_len())
        .filter(|&l| kernel.taylor(l) != C64::new(0.0, 0.0))
        .map(|l| kernel.taylor(l) * power_log_term(l, lambda, n, eps))
        .sum()
}

/// `C_eps = int_eps^a k(t) ln^n t / t^lambda dt - subtraction_series` on the
/// sequence `eps_j = eps_0 2^{-j}`. Since the whole Taylor tail is removed,
/// `C_eps` does not depend on `eps`; the spread of the sequence is the error
/// estimate and must stay below [`EPSILON_SPREAD_TOL`].
pub fn fpi_epsilon_oracle(
    kernel: &Kernel,
    lambda: C64,
    n: usize,
    upper: Upper,
    cfg: &QuadratureConfig,
) -> Result<FpiResult> {
    kernel.check_tail(upper, lambda.re)?;
    let eps0 = cfg.epsilon.unwrap_or_else(|| default_epsilon(upper, kernel.rho0()));
    let budget = cfg.budget();
    let mut values = Vec::with_capacity(EPSILON_LEVELS);
    let mut quad_err = 0.0f64;
    let mut last_contour = None;
    for j in 0..EPSILON_LEVELS {
        let eps = eps0 / 2f64.powi(j as i32);
        let contour = KeyholeContour::for_integrand(kernel, upper, Some(eps), lambda.re)?;
        let integral = real_leg(
            |t| {
                let lt = BranchedLog::upper_lip(t);
                kernel.eval(C64::new(t, 0.0)) * lt.pow(-lambda) * lt.powi(n)
            },
            &contour,
            cfg,
            &budget,
        )?;
        quad_err = quad_err.max(integral.error);
        values.push(integral.value - subtraction_series(kernel, lambda, n, eps));
        last_contour = Some(contour);
    }
    let value = values[0];
    let spread = values.iter().map(|v| (v - value).norm()).fold(0.0, f64::max);
    if spread > EPSILON_SPREAD_TOL * value.norm().max(1.0) {
        return Err(Error::Convergence(format!("epsilon sequence spread {spread:.3e} did not stabilize")));
    }
    let contour = last_contour.expect("at least one level");
    Ok(FpiResult {
        value,
        est_error: spread.max(quad_err),
        diagnostics: FpiDiagnostics {
            method: "epsilon-oracle",
            epsilon: eps0,
            tail: contour.tail,
            evaluations: budget.used(),
            terms: EPSILON_LEVELS,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglim::cauchy_derivatives;
    use crate::specialfun::complex_gamma;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn derivative_closed_form_vs_cauchy() {
        let eps = 0.1f64;
        let n = 3;
        let h = |lam: C64| ((re(1.0) - lam) * eps.ln()).exp() / (lam - 1.0);
        let d = cauchy_derivatives(&h, re(2.5), 0.4, n).unwrap();
        let want = -d[n]; // (-1)^3
        let got = power_log_term(0, re(2.5), n, eps);
        assert!((got - want).norm() < 1e-10 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn simple_divergent_parts() {
        let one = Kernel::constant();
        let v = divergent_part(&one, re(1.5), 0, 0.25).unwrap();
        assert!((v - re(0.25f64.powf(-0.5) / 0.5)).norm() < 1e-14);
        // collision at lambda = 1: -ln^{n+1} eps/(n+1)
        let v = divergent_part(&one, re(1.0), 1, 0.5).unwrap();
        assert!((v - re(-(0.5f64.ln()).powi(2) / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn oracle_examples() {
        let cfg = QuadratureConfig::default();
        let k = Kernel::exponential(1.0).unwrap();
        let v = fpi_epsilon_oracle(&k, re(1.5), 0, Upper::Infinite, &cfg).unwrap();
        let g = complex_gamma(re(-0.5)).unwrap();
        assert!((v.value - g).norm() < 1e-8 * g.norm());
        let one = Kernel::constant();
        let v = fpi_epsilon_oracle(&one, re(2.5), 0, Upper::Finite(1.0), &cfg).unwrap();
        assert!((v.value - re(-1.0 / 1.5)).norm() < 1e-12);
    }
}
