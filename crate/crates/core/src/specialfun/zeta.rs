use std::f64::consts::PI;

use crate::combinatorics::{bernoulli_f64, bernoulli_number, factorial_f64, rational_to_f64};
use crate::error::{Error, Result};

/// Riemann zeta at an integer `s >= 2`.
///
/// Even `s` up to 60 use the Bernoulli closed form; other arguments use a
/// direct sum with an Euler-Maclaurin tail.
pub fn zeta_integer(s: i64) -> Result<f64> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta_integer needs s >= 2, got {s}")));
    }
    if s % 2 == 0 && s <= 60 {
        let j = (s / 2) as i32;
        let b = rational_to_f64(&bernoulli_number(s as usize));
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        return Ok(sign * 2f64.powi(2 * j - 1) * PI.powi(2 * j) * b / factorial_f64(s as usize));
    }
    Ok(euler_maclaurin(s as f64))
}

fn euler_maclaurin(s: f64) -> f64 {
    const N: usize = 10;
    let n = N as f64;
    let mut head = 0.0;
    for k in (1..N).rev() {
        head += (k as f64).powf(-s);
    }
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s (s+1) ... (s+2j-2) over (2j)!, times N^{-s-2j+1}
    let mut rising = s;
    let mut p = n.powf(-s - 1.0);
    for j in 1..=12 {
        if j > 1 {
            rising *= (s + 2.0 * j as f64 - 3.0) * (s + 2.0 * j as f64 - 2.0);
        }
        let t = bernoulli_f64(2 * j) / factorial_f64(2 * j) * rising * p;
        tail += t;
        if t.abs() < 1e-18 * head {
            break;
        }
        p /= n * n;
    }
    head + tail
}
