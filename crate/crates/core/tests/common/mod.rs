#![allow(dead_code)]

use finpart::C64;

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `|a - b| <= tol * max(|b|, floor)`.
pub fn close_to(a: C64, b: C64, tol: f64, floor: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(floor)
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}
