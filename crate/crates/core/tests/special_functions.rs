mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{close_to, re};
use finpart::quadrature::{tanh_sinh, EvalBudget, Tolerance};
use finpart::specialfun::{bessel_j0, complex_gamma, digamma, gauss_2f1, gauss_2f1_db, polygamma, EULER_GAMMA};
use finpart::C64;
use proptest::prelude::*;

fn off_integers() -> impl Strategy<Value = C64> {
    (-3.5f64..3.5, -2.0f64..2.0)
        .prop_filter("away from the poles", |(x, y)| y.abs() > 0.05 || (x - x.round()).abs() > 0.05)
        .prop_map(|(x, y)| C64::new(x, y))
}

proptest! {
    #[test]
    fn gamma_reflection(z in off_integers()) {
        let lhs = complex_gamma(z).unwrap() * complex_gamma(1.0 - z).unwrap() * (PI * z).sin();
        prop_assert!(close_to(lhs, re(PI), 1e-11, 1.0), "{lhs}");
    }

    #[test]
    fn polygamma_recurrence(z in off_integers(), m in 0usize..4) {
        // psi^(m)(z+1) = psi^(m)(z) + (-1)^m m! / z^{m+1}
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let fact: f64 = (1..=m).map(|k| k as f64).product();
        let step = sign * fact / z.powi(m as i32 + 1);
        let lhs = polygamma(m, z + 1.0).unwrap();
        let rhs = polygamma(m, z).unwrap() + step;
        prop_assert!(close_to(lhs, rhs, 1e-10, step.norm().max(1.0)), "m={} {} vs {}", m, lhs, rhs);
    }

    #[test]
    fn gamma_recurrence(z in off_integers()) {
        let lhs = complex_gamma(z + 1.0).unwrap();
        let rhs = z * complex_gamma(z).unwrap();
        prop_assert!(close_to(lhs, rhs, 1e-12, 1e-300));
    }
}

#[test]
fn digamma_anchors() {
    assert!(close_to(digamma(re(1.0)).unwrap(), re(-EULER_GAMMA), 1e-15, 1.0));
    let half = -EULER_GAMMA - 2.0 * 2f64.ln();
    assert!(close_to(digamma(re(0.5)).unwrap(), re(half), 1e-14, 1.0));
    // psi'(1) = pi^2/6
    assert!(close_to(polygamma(1, re(1.0)).unwrap(), re(PI * PI / 6.0), 1e-14, 1.0));
}

#[test]
fn bessel_anchors() {
    assert!(close_to(bessel_j0(re(1.0)).unwrap(), re(0.765_197_686_557_966_6), 1e-15, 1.0));
    assert!(close_to(bessel_j0(re(10.0)).unwrap(), re(-0.245_935_764_451_348_3), 1e-13, 1.0));
    // J0(2.404825557695773) is the first zero
    assert!(bessel_j0(re(2.404_825_557_695_773)).unwrap().norm() < 1e-15);
}

fn weighted_integral(a: f64, b: f64, power: f64, log: bool) -> f64 {
    // sqrt((a-x)/(x-b)) x^{-power} (ln x)^log over (b, a)
    let budget = EvalBudget::unlimited();
    let f = |x: f64, da: f64, db: f64| {
        let v = (db / da).sqrt() * x.powf(-power) * if log { x.ln() } else { 1.0 };
        re(v)
    };
    tanh_sinh(f, b, a, Tolerance::new(1e-15, 1e-14), 12, &budget).unwrap().value.re
}

#[test]
fn hypergeometric_matches_translated_integral() {
    // int_b^a sqrt((a-x)/(x-b)) x^{-p} dx = (pi/2)(a-b) b^{-p} 2F1(1/2, p; 2; 1 - a/b)
    for (a, b, p) in [(1.5, 1.0, 2.0), (3.0, 2.0, 2.3), (1.2, 1.0, 4.0)] {
        let z = re(1.0 - a / b);
        let f = gauss_2f1(re(0.5), re(p), re(2.0), z).unwrap();
        let want = FRAC_PI_2 * (a - b) * b.powf(-p) * f.re;
        let got = weighted_integral(a, b, p, false);
        assert!((got - want).abs() < 1e-12 * want.abs(), "{got} vs {want}");

        // d/dp of both sides: the log-weighted integral is
        // (pi/2)(a-b) b^{-p} [ln b F - dF/dp].
        let fb = gauss_2f1_db(1, re(0.5), re(p), re(2.0), z).unwrap();
        let want = FRAC_PI_2 * (a - b) * b.powf(-p) * (b.ln() * f.re - fb.re);
        let got = weighted_integral(a, b, p, true);
        assert!((got - want).abs() < 1e-11 * want.abs(), "{got} vs {want}");
    }
}

#[test]
fn hypergeometric_parameter_derivatives_by_differences() {
    let (a, c, z) = (re(0.5), re(2.0), re(-0.5));
    let h = 1e-3;
    let f = |b: f64| gauss_2f1(a, re(b), c, z).unwrap();
    let d1 = (8.0 * (f(2.0 + h) - f(2.0 - h)) - (f(2.0 + 2.0 * h) - f(2.0 - 2.0 * h))) / (12.0 * h);
    let d2 =
        (-(f(2.0 + 2.0 * h) + f(2.0 - 2.0 * h)) + 16.0 * (f(2.0 + h) + f(2.0 - h)) - 30.0 * f(2.0)) / (12.0 * h * h);
    assert!(close_to(gauss_2f1_db(1, a, re(2.0), c, z).unwrap(), d1, 1e-9, 1.0));
    assert!(close_to(gauss_2f1_db(2, a, re(2.0), c, z).unwrap(), d2, 1e-6, 1.0));
}
