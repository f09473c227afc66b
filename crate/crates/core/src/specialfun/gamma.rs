use std::f64::consts::PI;

use super::{finite, is_nonpositive_integer};
use crate::combinatorics::bernoulli_f64;
use crate::error::{Error, Result};
use crate::C64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn pole(z: C64, what: &str) -> Error {
    Error::Pole(format!("{what} has a pole at z = {}", z.re))
}

/// Lanczos partial fraction sum and the shifted point `t = z + g - 1/2`, for `Re z >= 1/2`.
fn lanczos_parts(z: C64) -> (C64, C64) {
    let zm = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (zm + i as f64);
    }
    (x, zm + LANCZOS_G + 0.5)
}

/// Gamma function on the complex plane (Lanczos with reflection).
pub fn complex_gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(pole(z, "Gamma"));
    }
    if z.im == 0.0 && z.re >= 1.0 && z.re.fract() == 0.0 && z.re <= 23.0 {
        let n = z.re as u64;
        return Ok(C64::new((1..n).fold(1.0, |a, i| a * i as f64), 0.0));
    }
    let v = if z.re < 0.5 {
        let s = (PI * z).sin();
        PI / (s * gamma_right(1.0 - z))
    } else {
        gamma_right(z)
    };
    finite(v, "Gamma")
}

fn gamma_right(z: C64) -> C64 {
    let (x, t) = lanczos_parts(z);
    let sqrt_two_pi = (2.0 * PI).sqrt();
    if z.im == 0.0 {
        let (tr, zr) = (t.re, z.re - 0.5);
        // Split the power so that large arguments do not overflow early.
        let half = tr.powf(0.5 * zr);
        return C64::new(sqrt_two_pi * half * (half * (-tr).exp()) * x.re, 0.0);
    }
    sqrt_two_pi * ((z - 0.5) * t.ln() - t).exp() * x
}

/// Logarithm of Gamma. The imaginary part is only defined modulo `2pi`;
/// `exp(ln_gamma(z)) == complex_gamma(z)`.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(pole(z, "ln Gamma"));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return finite(C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z)?, "ln Gamma");
    }
    let (x, t) = lanczos_parts(z);
    finite(0.5 * (2.0 * PI).ln() + (z - 0.5) * t.ln() - t + x.ln(), "ln Gamma")
}

pub fn digamma(z: C64) -> Result<C64> {
    polygamma(0, z)
}

/// Polygamma `psi^{(j)}(z)`: upward recurrence until `Re z >= 10`, then the
/// asymptotic Bernoulli expansion.
pub fn polygamma(j: usize, z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(pole(z, "polygamma"));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("polygamma argument must be finite".into()));
    }
    let jf = factorial(j);
    // psi^{(j)}(z) = psi^{(j)}(z + m) - (-1)^j j! sum_{i<m} (z+i)^{-(j+1)}
    let mut shift = C64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 10.0 {
        shift += w.powi(-(j as i32 + 1));
        w += 1.0;
    }
    let asym = polygamma_asymptotic(j, w);
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    finite(asym - sign * jf * shift, "polygamma")
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

fn polygamma_asymptotic(j: usize, w: C64) -> C64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    if j == 0 {
        let mut s = w.ln() - 0.5 * inv;
        let mut p = inv2;
        for k in 1..=20 {
            let t = bernoulli_f64(2 * k) / (2 * k) as f64 * p;
            s -= t;
            if t.norm() < 1e-18 * s.norm() {
                break;
            }
            p *= inv2;
        }
        return s;
    }
    let jf = j as f64;
    let inv_j = inv.powi(j as i32);
    let mut s = factorial(j - 1) * inv_j + factorial(j) * 0.5 * inv_j * inv;
    // coefficient (2k+j-1)!/(2k)!, updated incrementally
    let mut coeff = factorial(j) / 2.0 * (j as f64 + 1.0) / 1.0;
    let mut p = inv_j * inv2;
    for k in 1..=30 {
        if k > 1 {
            let kk = 2.0 * k as f64;
            coeff *= (kk + jf - 2.0) * (kk + jf - 1.0) / ((kk - 1.0) * kk);
        }
        let t = bernoulli_f64(2 * k) * coeff * p;
        s += t;
        if t.norm() < 1e-18 * s.norm() {
            break;
        }
        p *= inv2;
    }
    if j % 2 == 1 {
        s
    } else {
        -s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn gamma_examples() {
        let r = |x: f64| complex_gamma(C64::new(x, 0.0)).unwrap();
        assert!(close(r(0.5), C64::new(PI.sqrt(), 0.0), 1e-14));
        assert_eq!(r(5.0).re, 24.0);
        assert!(close(r(-0.5), C64::new(-2.0 * PI.sqrt(), 0.0), 1e-14));
        assert!(close(r(30.5), C64::new(4.8226969334909086e31, 0.0), 1e-13));
        let c = complex_gamma(C64::new(0.3, 2.0)).unwrap();
        assert!(close(c, C64::new(0.05746533756958803, -0.07498491258264614), 1e-13));
        assert!(matches!(complex_gamma(C64::new(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(complex_gamma(C64::new(0.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn ln_gamma_exponentiates_to_gamma() {
        for z in [C64::new(-2.5, 0.3), C64::new(4.0, -7.0), C64::new(0.1, 0.0)] {
            let a = ln_gamma(z).unwrap().exp();
            assert!(close(a, complex_gamma(z).unwrap(), 1e-12), "{z}");
        }
        let l = ln_gamma(C64::new(-2.5, 0.3)).unwrap();
        assert!((l.re + 0.4320888926132019).abs() < 1e-13);
    }

    #[test]
    fn polygamma_examples() {
        let psi1 = digamma(C64::new(1.0, 0.0)).unwrap();
        assert!((psi1.re + EULER_GAMMA).abs() < 1e-15);
        let psim = digamma(C64::new(-0.5, 0.0)).unwrap();
        assert!((psim.re - (2.0 - EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-14);
        // psi^{(j)}(1/2) = (-1)^{j+1} j! (2^{j+1} - 1) zeta(j+1)
        let zeta = [0.0, 0.0, PI * PI / 6.0, 1.2020569031595942, PI.powi(4) / 90.0, 1.0369277551433699];
        for j in 1..=4 {
            let v = polygamma(j, C64::new(0.5, 0.0)).unwrap();
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let want = sign * factorial(j) * (2f64.powi(j as i32 + 1) - 1.0) * zeta[j + 1];
            assert!((v.re - want).abs() < 1e-12 * want.abs(), "j={j}");
        }
        let c = polygamma(3, C64::new(-3.3, 0.2)).unwrap();
        assert!(close(c, C64::new(-237.87723761373277, 233.80439923852917), 1e-11));
    }
}
