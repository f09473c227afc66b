//! Derivatives in `lambda` of `f(lambda) = 1/((e^{-2 pi i lambda} - 1) z^lambda)`
//! and their regularized limits at integers; these are the kernels that turn
//! finite-part integrals into contour integrals.

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;

use crate::combinatorics::{
    bernoulli_number, binomial, binomial_f64, factorial_f64, rational_to_f64, stirling_second, Rational,
};
use crate::error::{Error, Result};
use crate::specialfun::BranchedLog;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn is_integer(lambda: C64) -> bool {
    lambda.im == 0.0 && lambda.re.fract() == 0.0
}

/// `f(lambda) = 1/((e^{-2 pi i lambda} - 1) z^lambda)`.
pub fn fn_lambda(lambda: C64, lnz: &BranchedLog) -> Result<C64> {
    if is_integer(lambda) {
        return Err(Error::Singular(format!("f(lambda) has a pole at the integer {}", lambda.re)));
    }
    Ok(1.0 / (((-TAU * I * lambda).exp() - 1.0) * lnz.pow(lambda)))
}

/// `d^n f / d lambda^n` at non-integer `lambda`.
pub fn fn_lambda_derivative(n: usize, lambda: C64, lnz: &BranchedLog) -> Result<C64> {
    let f = fn_lambda(lambda, lnz)?;
    let q = 1.0 / ((TAU * I * lambda).exp() - 1.0);
    let mut s = C64::new(0.0, 0.0);
    for j in 0..=n {
        let mut inner = C64::new(0.0, 0.0);
        for l in 0..=n - j {
            let st = rational_to_f64(&Rational::from(stirling_second(n - j, l)?));
            inner += factorial_f64(l) * st * q.powi(l as i32);
        }
        s += binomial_f64(n, j) * (TAU * I).powi((n - j) as i32) * lnz.powi(j) * inner;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * s * f)
}

/// Exact coefficients `q_j`, `j = 0..=n+1`, of the integer-case kernel
/// written as `sum_j q_j (pi i)^{n+1-j} ln^j z / (2 pi i z^b)`.
pub fn integer_case_log_polynomial(n: usize) -> Vec<Rational> {
    let mut q = Vec::with_capacity(n + 2);
    for j in 0..=n {
        let m = n - j + 1;
        // C(n,j) 2^m B_m / m
        let c = Rational::from(binomial(n, j) * (BigInt::from(1) << m)) * bernoulli_number(m)
            / Rational::from(BigInt::from(m));
        q.push(c);
    }
    q.push(Rational::new(BigInt::from(1), BigInt::from(n + 1)));
    q
}

/// Floating coefficients `c_j` of `ln^j z / z^b` in the integer-case kernel.
pub fn integer_case_coefficients(n: usize) -> Vec<C64> {
    integer_case_log_polynomial(n)
        .iter()
        .enumerate()
        .map(|(j, q)| rational_to_f64(q) * (PI * I).powi((n + 1 - j) as i32) / (TAU * I))
        .collect()
}

/// Integer-case kernel
/// `ln^{n+1} z/(2 pi i (n+1) z^b) + sum_j C(n,j) (2 pi i)^{n-j} B_{n-j+1}/(n-j+1) ln^j z / z^b`.
pub fn integer_case_kernel(n: usize, b: i64, lnz: &BranchedLog) -> C64 {
    let c = integer_case_coefficients(n);
    let poly: C64 = c.iter().enumerate().map(|(j, cj)| cj * lnz.powi(j)).sum();
    poly * lnz.pow(C64::new(-(b as f64), 0.0))
}

/// Regularized limit of `f^{(n)}(lambda)` as `lambda -> b`; equals
/// `(-1)^n` times [`integer_case_kernel`].
pub fn fn_lambda_reglim(n: usize, b: i64, lnz: &BranchedLog) -> C64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * integer_case_kernel(n, b, lnz)
}
