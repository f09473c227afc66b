mod common;

use common::{close_to, re};
use finpart::reglim::{
    reglim_contour_oracle, reglim_corollary, reglim_ratio, reglim_ratio_compositions, DerivativeOracle, ORACLE_GRID,
    ORACLE_TOL,
};
use finpart::C64;
use proptest::prelude::*;

/// Polynomial in `(lambda - lambda0)` with coefficients `c`.
#[derive(Debug, Clone)]
struct Shifted {
    at: C64,
    c: Vec<C64>,
}

impl Shifted {
    fn eval(&self, lam: C64) -> C64 {
        let x = lam - self.at;
        self.c.iter().rev().fold(re(0.0), |acc, a| acc * x + a)
    }

    fn oracle(&self, max_order: usize) -> DerivativeOracle {
        DerivativeOracle::from_callback(self.at, max_order, |k| {
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            self.c.get(k).copied().unwrap_or(re(0.0)) * fact
        })
    }
}

fn coeff() -> impl Strategy<Value = C64> {
    (-0.5f64..0.5, -0.5f64..0.5).prop_map(|(x, y)| C64::new(x, y))
}

/// `f` with `f(lambda0) = 1 + ...` and `g = (lambda - lambda0)^n u` where
/// `u(lambda0) = 1` and `|u - 1| < 1/8` on the oracle circle of radius 0.2.
fn manufactured(n: usize) -> impl Strategy<Value = (Shifted, Shifted)> {
    (
        (-1.0f64..1.0, -1.0f64..1.0),
        proptest::collection::vec(coeff(), 2 * n + 1),
        proptest::collection::vec(coeff(), n + 1),
    )
        .prop_map(move |((x, y), fc, uc)| {
            let at = C64::new(x, y);
            let mut fc = fc;
            fc[0] += 1.0;
            let mut gc = vec![re(0.0); n];
            gc.push(re(1.0));
            gc.extend(uc);
            (Shifted { at, c: fc }, Shifted { at, c: gc })
        })
}

fn all_methods(f: &Shifted, g: &Shifted, n: usize) -> Vec<C64> {
    let (fo, go) = (f.oracle(2 * n), g.oracle(2 * n));
    let mut v = vec![
        reglim_ratio(&fo, &go, n).unwrap().value,
        reglim_ratio_compositions(&fo, &go, n).unwrap().value,
        reglim_contour_oracle(|l| f.eval(l) / g.eval(l), f.at, 0.2, ORACLE_GRID, ORACLE_TOL).unwrap().value,
    ];
    if n <= 4 {
        v.push(reglim_corollary(n, &fo, &go).unwrap().value);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn methods_agree((f, g) in (1usize..=5).prop_flat_map(manufactured)) {
        let n = g.c.iter().position(|c| *c != re(0.0)).unwrap();
        let v = all_methods(&f, &g, n);
        for w in &v[1..] {
            prop_assert!(close_to(*w, v[0], 1e-10, 1.0), "n={} {:?}", n, v);
        }
    }

    #[test]
    fn linear_in_numerator((f, g) in manufactured(3), (h, _) in manufactured(3), s in coeff()) {
        let n = 3;
        let sum = Shifted { at: f.at, c: f.c.iter().zip(&h.c).map(|(a, b)| a + s * b).collect() };
        let lhs = reglim_ratio(&sum.oracle(2 * n), &g.oracle(2 * n), n).unwrap().value;
        let a = reglim_ratio(&f.oracle(2 * n), &g.oracle(2 * n), n).unwrap().value;
        let b = reglim_ratio(&Shifted { at: f.at, c: h.c.clone() }.oracle(2 * n), &g.oracle(2 * n), n).unwrap().value;
        prop_assert!(close_to(lhs, a + s * b, 1e-11, 1.0));
    }

    #[test]
    fn covariant_under_common_scaling((f, g) in manufactured(2), s in 0.1f64..10.0) {
        let n = 2;
        let scale = |p: &Shifted, k: f64| Shifted { at: p.at, c: p.c.iter().map(|c| c * k).collect() };
        let base = reglim_ratio(&f.oracle(2 * n), &g.oracle(2 * n), n).unwrap().value;
        let both = reglim_ratio(&scale(&f, s).oracle(2 * n), &scale(&g, s).oracle(2 * n), n).unwrap().value;
        let num = reglim_ratio(&scale(&f, s).oracle(2 * n), &g.oracle(2 * n), n).unwrap().value;
        prop_assert!(close_to(both, base, 1e-12, 1.0));
        prop_assert!(close_to(num, s * base, 1e-12, 1.0));
    }
}

#[test]
fn cos_over_sin_squared() {
    let f = DerivativeOracle::from_callback(re(0.0), 4, |k| re([1.0, 0.0, -1.0, 0.0, 1.0][k]));
    let g = DerivativeOracle::from_callback(re(0.0), 4, |k| re([0.0, 0.0, 2.0, 0.0, -8.0][k]));
    for v in [reglim_ratio(&f, &g, 2).unwrap(), reglim_corollary(2, &f, &g).unwrap()] {
        assert!(close_to(v.value, re(-1.0 / 6.0), 1e-15, 1.0));
    }
    let o = reglim_contour_oracle(|l| l.cos() / l.sin().powi(2), re(0.0), 0.5, ORACLE_GRID, ORACLE_TOL).unwrap();
    assert!(close_to(o.value, re(-1.0 / 6.0), 1e-12, 1.0));
}

#[test]
fn wrong_order_is_rejected() {
    let (f, g) = (
        Shifted { at: re(0.0), c: vec![re(1.0), re(0.3), re(0.1), re(0.0), re(0.0)] },
        Shifted { at: re(0.0), c: vec![re(0.0), re(1.0), re(0.5), re(0.0), re(0.0)] },
    );
    let e = reglim_ratio(&f.oracle(4), &g.oracle(4), 2).unwrap_err();
    assert_eq!(e.kind(), "wrong-order");
}
