use std::f64::consts::FRAC_PI_2;

use super::finite;
use crate::combinatorics::binomial_f64;
use crate::error::{Error, Result};
use crate::C64;

/// `sum_{p=0}^{l} (-1)^p C(l,p) (2p+1)^j`.
fn odd_power_difference(l: usize, j: usize) -> f64 {
    (0..=l)
        .map(|p| {
            let s = if p % 2 == 0 { 1.0 } else { -1.0 };
            s * binomial_f64(l, p) * ((2 * p + 1) as f64).powi(j as i32)
        })
        .sum()
}

/// `sum_m (-1)^m C(l, 2m+g) u^{2m+g}` over `2m + g <= l`.
fn parity_binomial_sum(l: usize, g: usize, u: C64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    let mut m = 0;
    while 2 * m + g <= l {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binomial_f64(l, 2 * m + g) * u.powi((2 * m + g) as i32);
        m += 1;
    }
    s
}

fn is_integer_with_parity(nu: C64, odd: bool) -> bool {
    nu.im == 0.0 && nu.re.fract() == 0.0 && ((nu.re.abs() as u64) % 2 == 1) == odd
}

/// `d^j/dnu^j sec(pi nu / 2)` from the closed-form tangent sum.
pub fn sec_derivative(j: usize, nu: C64) -> Result<C64> {
    if is_integer_with_parity(nu, true) {
        return Err(Error::Pole(format!("sec(pi nu/2) is singular at nu = {}", nu.re)));
    }
    let x = FRAC_PI_2 * nu;
    let tan = x.tan();
    let g = j % 2;
    let mut s = C64::new(0.0, 0.0);
    for l in 0..=j {
        s += parity_binomial_sum(l, g, tan) * odd_power_difference(l, j) / 2f64.powi(l as i32);
    }
    let sign = if (j + 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
    finite(sign * FRAC_PI_2.powi(j as i32) / x.cos() * s, "sec derivative")
}

/// `d^j/dnu^j csc(pi nu / 2)` from the closed-form cotangent sum.
///
/// The outer sum runs from `l = 0`; starting at `l = 1` drops the whole
/// value for even `j`.
pub fn csc_derivative(j: usize, nu: C64) -> Result<C64> {
    if is_integer_with_parity(nu, false) {
        return Err(Error::Pole(format!("csc(pi nu/2) is singular at nu = {}", nu.re)));
    }
    let x = FRAC_PI_2 * nu;
    let cot = x.cos() / x.sin();
    let g = j % 2;
    let mut s = C64::new(0.0, 0.0);
    for l in 0..=j {
        s += odd_power_difference(l, j) * parity_binomial_sum(l, g, cot) / 2f64.powi(l as i32);
    }
    let sign = if j / 2 % 2 == 0 { 1.0 } else { -1.0 };
    finite(sign * FRAC_PI_2.powi(j as i32) / x.sin() * s, "csc derivative")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sec(nu: f64) -> f64 {
        1.0 / (FRAC_PI_2 * nu).cos()
    }

    fn csc(nu: f64) -> f64 {
        1.0 / (FRAC_PI_2 * nu).sin()
    }

    #[test]
    fn zeroth_and_first_derivatives() {
        let v = sec_derivative(0, C64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 2f64.sqrt()).abs() < 1e-15);
        let h = 1e-4;
        for (d, f) in [(sec_derivative as fn(usize, C64) -> Result<C64>, sec as fn(f64) -> f64), (csc_derivative, csc)]
        {
            let central = |h: f64| (f(0.3 + h) - f(0.3 - h)) / (2.0 * h);
            let fd = (4.0 * central(h) - central(2.0 * h)) / 3.0;
            let an = d(1, C64::new(0.3, 0.0)).unwrap().re;
            assert!((an - fd).abs() < 1e-9 * an.abs().max(1.0), "{an} vs {fd}");
            // third derivative by a five-point stencil
            let stencil = |h: f64| {
                (f(0.3 + 2.0 * h) - 2.0 * f(0.3 + h) + 2.0 * f(0.3 - h) - f(0.3 - 2.0 * h)) / (2.0 * h * h * h)
            };
            let fd3 = (4.0 * stencil(1e-3) - stencil(2e-3)) / 3.0;
            let an3 = d(3, C64::new(0.3, 0.0)).unwrap().re;
            assert!((an3 - fd3).abs() < 1e-6 * an3.abs().max(1.0), "{an3} vs {fd3}");
        }
    }

    #[test]
    fn even_order_csc_derivatives() {
        // csc''(pi nu/2) = (pi/2)^2 csc (csc^2 + cot^2)
        let nu = 0.3;
        let x = FRAC_PI_2 * nu;
        let want = FRAC_PI_2.powi(2) * csc(nu) * (csc(nu).powi(2) + (x.cos() / x.sin()).powi(2));
        let got = csc_derivative(2, C64::new(nu, 0.0)).unwrap().re;
        assert!((got - want).abs() < 1e-13 * want);
        assert!((csc_derivative(0, C64::new(nu, 0.0)).unwrap().re - csc(nu)).abs() < 1e-15);
    }

    #[test]
    fn poles() {
        assert!(matches!(sec_derivative(2, C64::new(1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(csc_derivative(2, C64::new(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(csc_derivative(1, C64::new(-2.0, 0.0)), Err(Error::Pole(_))));
        assert!(sec_derivative(1, C64::new(0.0, 0.0)).is_ok());
    }
}
