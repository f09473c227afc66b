//! Named ratios `f/g` for the `reglim` subcommand.

use std::f64::consts::PI;

use finpart::specialfun::{complex_gamma, digamma, polygamma};
use finpart::C64;

use crate::kernels::parse_call;
use crate::UsageError;

type Fun = Box<dyn Fn(C64) -> C64 + Send + Sync>;

/// A ratio `f/g` with a zero of `g` of order `order` at `at`.
pub struct Expression {
    pub id: String,
    pub f: Fun,
    pub g: Fun,
    pub at: f64,
    pub order: usize,
    /// Known regularized limit at `at`, when there is one.
    pub expected: Option<C64>,
}

#[derive(Debug, Clone, Copy)]
pub struct ExpressionEntry {
    pub id: &'static str,
    pub params: &'static [&'static str],
    pub doc: &'static str,
}

pub const EXPRESSIONS: &[ExpressionEntry] = &[
    ExpressionEntry { id: "exp-over-lambda", params: &[], doc: "e^l / l at 0, order 1; limit 1" },
    ExpressionEntry { id: "cos-over-sin2", params: &[], doc: "cos l / sin^2 l at 0, order 2; limit -1/6" },
    ExpressionEntry {
        id: "gamma-cot-csc",
        params: &["beta", "n"],
        doc: "(-1)^n pi^2 beta^(n-1+l) cos(pi l) / (Gamma(n+l) sin^2(pi l)) at 0, order 2",
    },
    ExpressionEntry {
        id: "gamma-psi-csc",
        params: &["beta", "n"],
        doc: "(-1)^n pi beta^(n-1+l) psi(n+l) / (Gamma(n+l) sin(pi l)) at 0, order 1",
    },
];

fn or_nan(v: finpart::Result<C64>) -> C64 {
    v.unwrap_or(C64::new(f64::NAN, f64::NAN))
}

fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn beta_and_n(id: &str, args: Option<Vec<f64>>) -> Result<(f64, usize), UsageError> {
    let a = args.ok_or_else(|| UsageError(format!("`{id}` needs (beta, n)")))?;
    match a.as_slice() {
        [b, n] if *b > 0.0 && *n >= 1.0 && n.fract() == 0.0 => Ok((*b, *n as usize)),
        _ => Err(UsageError(format!("`{id}` needs beta > 0 and an integer n >= 1"))),
    }
}

/// Looks up `id` or `id(params)`.
pub fn expression(spec: &str) -> Result<Expression, UsageError> {
    let (name, args) = parse_call(spec)?;
    let plain = |f: Fun, g: Fun, order, expected| Expression { id: name.to_string(), f, g, at: 0.0, order, expected };
    match name {
        "exp-over-lambda" => Ok(plain(Box::new(|l: C64| l.exp()), Box::new(|l| l), 1, Some(C64::new(1.0, 0.0)))),
        "cos-over-sin2" => Ok(plain(
            Box::new(|l: C64| l.cos()),
            Box::new(|l: C64| l.sin().powi(2)),
            2,
            Some(C64::new(-1.0 / 6.0, 0.0)),
        )),
        "gamma-cot-csc" => {
            let (beta, n) = beta_and_n(name, args)?;
            let nf = n as f64;
            let f = move |l: C64| {
                sign(n) * PI * PI * C64::new(beta, 0.0).powc(l + nf - 1.0) * (PI * l).cos()
                    / or_nan(complex_gamma(l + nf))
            };
            let (lb, psi, psi1) = digammas(beta, n);
            let expected = sign(n) * beta.powi(n as i32 - 1) / gamma_int(n)
                * (0.5 * lb * lb - lb * psi + 0.5 * psi * psi - 0.5 * psi1 - PI * PI / 6.0);
            Ok(plain(Box::new(f), Box::new(|l: C64| (PI * l).sin().powi(2)), 2, Some(C64::new(expected, 0.0))))
        }
        "gamma-psi-csc" => {
            let (beta, n) = beta_and_n(name, args)?;
            let nf = n as f64;
            let f = move |l: C64| {
                sign(n) * PI * C64::new(beta, 0.0).powc(l + nf - 1.0) * or_nan(digamma(l + nf))
                    / or_nan(complex_gamma(l + nf))
            };
            let (lb, psi, psi1) = digammas(beta, n);
            let expected = sign(n) * beta.powi(n as i32 - 1) / gamma_int(n) * (psi1 - psi * psi + lb * psi);
            Ok(plain(Box::new(f), Box::new(|l: C64| (PI * l).sin()), 1, Some(C64::new(expected, 0.0))))
        }
        _ => Err(UsageError(format!("unknown expression `{name}`"))),
    }
}

/// `(ln beta, psi(n), psi'(n))`.
fn digammas(beta: f64, n: usize) -> (f64, f64, f64) {
    let z = C64::new(n as f64, 0.0);
    (beta.ln(), or_nan(digamma(z)).re, or_nan(polygamma(1, z)).re)
}

fn gamma_int(n: usize) -> f64 {
    (1..n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_resolve() {
        for e in EXPRESSIONS {
            let spec = if e.params.is_empty() { e.id.to_string() } else { format!("{}(2, 2)", e.id) };
            let x = expression(&spec).unwrap();
            assert!(x.g.as_ref()(C64::new(x.at, 0.0)).norm() < 1e-15);
            assert!(x.f.as_ref()(C64::new(x.at, 0.0)).norm() > 0.0);
        }
        assert!(expression("gamma-cot-csc(2)").is_err());
        assert!(expression("gamma-psi-csc(2, 0)").is_err());
        assert!(expression("missing").is_err());
    }
}
