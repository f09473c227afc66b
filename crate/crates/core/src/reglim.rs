//! Regularized limits: the constant Laurent coefficient of `f/g` at a zero
//! of `g` of known order, by partition sums, composition sums, hard-coded
//! low-order formulas, and a contour-mean oracle.

use std::f64::consts::TAU;

use crate::combinatorics::{binomial_f64, compositions, factorial_f64, partitions};
use crate::error::{Error, Result};
use crate::quadrature::{periodic_mean, EvalBudget, Tolerance};
use crate::C64;

/// Relative threshold below which `g^{(n)}` counts as zero.
pub const ORDER_TOL: f64 = 1e-8;
pub const ORACLE_GRID: usize = 64;
pub const ORACLE_TOL: f64 = 1e-12;
pub const ORACLE_MAX_GRID: usize = 1 << 16;
pub const CAUCHY_RADIUS: f64 = 0.1;

/// Derivatives `h^{(k)}(lambda0)` for `k = 0..=max_order`.
///
/// Invariant: `derivative(0)` is the direct value at the point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeOracle {
    point: C64,
    derivs: Vec<C64>,
}

impl DerivativeOracle {
    pub fn from_values(point: C64, derivs: Vec<C64>) -> Self {
        assert!(!derivs.is_empty(), "at least the zeroth derivative is required");
        Self { point, derivs }
    }

    /// Tabulates an exact derivative callback `k -> h^{(k)}(point)`.
    pub fn from_callback(point: C64, max_order: usize, h: impl Fn(usize) -> C64) -> Self {
        Self { point, derivs: (0..=max_order).map(h).collect() }
    }

    /// Cauchy-integral differentiation on the circle `|z - point| = radius`.
    pub fn cauchy(point: C64, max_order: usize, radius: f64, h: impl Fn(C64) -> C64) -> Result<Self> {
        let mut derivs = cauchy_derivatives(&h, point, radius, max_order)?;
        derivs[0] = h(point);
        Ok(Self { point, derivs })
    }

    pub fn point(&self) -> C64 {
        self.point
    }

    pub fn max_order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn derivative(&self, k: usize) -> Result<C64> {
        self.derivs.get(k).copied().ok_or_else(|| {
            Error::Precondition(format!("derivative of order {k} requested but only {} available", self.max_order()))
        })
    }

    fn needs(&self, order: usize, what: &str) -> Result<()> {
        if self.max_order() < order {
            Err(Error::Precondition(format!(
                "{what} needs derivatives up to order {order}, oracle provides {}",
                self.max_order()
            )))
        } else {
            Ok(())
        }
    }
}

/// Taylor-coefficient extraction by the trapezoid rule on a circle,
/// returning `h^{(k)}(z0)` for `k <= max_order`.
pub fn cauchy_derivatives(h: &dyn Fn(C64) -> C64, z0: C64, radius: f64, max_order: usize) -> Result<Vec<C64>> {
    if !(radius > 0.0) {
        return Err(Error::Domain("Cauchy radius must be positive".into()));
    }
    let coeffs = |n: usize| -> Vec<C64> {
        let samples: Vec<C64> = (0..n).map(|j| h(z0 + C64::from_polar(radius, TAU * j as f64 / n as f64))).collect();
        (0..=max_order)
            .map(|k| {
                let mut s = C64::new(0.0, 0.0);
                for (j, v) in samples.iter().enumerate() {
                    s += v * C64::from_polar(1.0, -TAU * (k * j % n) as f64 / n as f64);
                }
                s / n as f64
            })
            .collect()
    };
    let mut n = (4 * (max_order + 1)).max(32).next_power_of_two();
    let mut prev = coeffs(n);
    loop {
        n *= 2;
        let next = coeffs(n);
        let scale = next.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let change = prev.iter().zip(&next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prev = next;
        // the trapezoid sums carry a rounding floor of a few ulps of the scale
        if change <= 16.0 * f64::EPSILON * scale {
            break;
        }
        if n >= 1 << 14 {
            return Err(Error::Convergence("Cauchy differentiation did not converge".into()));
        }
    }
    Ok(prev.into_iter().enumerate().map(|(k, a)| a * factorial_f64(k) / radius.powi(k as i32)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegLimMethod {
    PartitionForm,
    CompositionForm,
    Corollary,
    ContourOracle,
}

impl RegLimMethod {
    pub fn tag(self) -> &'static str {
        match self {
            RegLimMethod::PartitionForm => "partition-form",
            RegLimMethod::CompositionForm => "composition-form",
            RegLimMethod::Corollary => "corollary",
            RegLimMethod::ContourOracle => "contour-oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegLimResult {
    pub value: C64,
    pub method: RegLimMethod,
    /// Partitions or compositions summed, or the final grid size.
    pub terms: usize,
    pub est_error: f64,
}

fn finite_result(value: C64, method: RegLimMethod, terms: usize, est_error: f64) -> Result<RegLimResult> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(RegLimResult { value, method, terms, est_error })
    } else {
        Err(Error::Range("regularized limit is not finite".into()))
    }
}

/// Checks the hypotheses shared by every closed-form route and returns the
/// normalized coefficients `c_r = n!/(n+r)! g^{(n+r)}/g^{(n)}`, `r = 1..=n`.
fn validate(f: &DerivativeOracle, g: &DerivativeOracle, n: usize) -> Result<Vec<C64>> {
    if n == 0 {
        return Err(Error::Domain("pole order must be positive".into()));
    }
    f.needs(n, "f")?;
    g.needs(2 * n, "g")?;
    let gd: Vec<C64> = (0..=2 * n).map(|k| g.derivs[k]).collect();
    let scale = gd.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if gd[n].norm() <= ORDER_TOL * scale || scale == 0.0 {
        return Err(Error::WrongOrder(format!("g^({n}) vanishes at the point; the zero has order greater than {n}")));
    }
    if let Some(k) = (0..n).find(|&k| gd[k].norm() > ORDER_TOL * scale) {
        return Err(Error::WrongOrder(format!("g^({k}) does not vanish; the zero has order {k}, not {n}")));
    }
    let fscale = (0..=n).map(|k| f.derivs[k].norm()).fold(0.0, f64::max);
    if f.derivs[0].norm() <= f64::EPSILON * fscale || fscale == 0.0 {
        return Err(Error::Precondition("f vanishes at the point; the stated pole order is overstated".into()));
    }
    let nf = factorial_f64(n);
    Ok((1..=n).map(|r| nf / factorial_f64(n + r) * gd[n + r] / gd[n]).collect())
}

/// Regularized limit of `f/g` at a zero of `g` of order `n`, via the
/// partition formula.
pub fn reglim_ratio(f: &DerivativeOracle, g: &DerivativeOracle, n: usize) -> Result<RegLimResult> {
    let c = validate(f, g, n)?;
    let gn = g.derivs[n];
    let mut value = f.derivs[n] / gn;
    let mut terms = 0;
    for k in 1..=n {
        let mut inner = C64::new(0.0, 0.0);
        for p in partitions(k)?.iter() {
            let mut prod = C64::new(crate::combinatorics::rational_to_f64(&p.arrangements().into()), 0.0);
            for (r, m) in p.nonzero() {
                prod *= (-c[r - 1]).powi(m as i32);
            }
            inner += prod;
            terms += 1;
        }
        value += factorial_f64(k) * binomial_f64(n, k) * f.derivs[n - k] * inner / gn;
    }
    finite_result(value, RegLimMethod::PartitionForm, terms, 0.0)
}

/// Same contract as [`reglim_ratio`], summing over compositions instead of
/// partitions.
pub fn reglim_ratio_compositions(f: &DerivativeOracle, g: &DerivativeOracle, n: usize) -> Result<RegLimResult> {
    let c = validate(f, g, n)?;
    if n > 24 {
        return Err(Error::Range(format!("composition form is limited to order 24, got {n}")));
    }
    let gn = g.derivs[n];
    let mut value = f.derivs[n] / gn;
    let mut terms = 0;
    for k in 1..=n {
        let mut inner = C64::new(0.0, 0.0);
        for (t_minus_1, group) in compositions(k).iter().enumerate() {
            let sign = if (t_minus_1 + 1) % 2 == 0 { 1.0 } else { -1.0 };
            for parts in group {
                let prod: C64 = parts.iter().map(|&r| c[r - 1]).product();
                inner += sign * prod;
                terms += 1;
            }
        }
        value += factorial_f64(k) * binomial_f64(n, k) * f.derivs[n - k] * inner / gn;
    }
    finite_result(value, RegLimMethod::CompositionForm, terms, 0.0)
}

/// Closed forms for pole orders 1 to 4.
pub fn reglim_corollary(n: usize, f: &DerivativeOracle, g: &DerivativeOracle) -> Result<RegLimResult> {
    if !(1..=4).contains(&n) {
        return Err(Error::Domain(format!("closed forms exist for pole orders 1..=4, got {n}; use reglim_ratio")));
    }
    validate(f, g, n)?;
    let fd = |k: usize| f.derivs[k];
    let gd = |k: usize| g.derivs[k];
    let value = match n {
        1 => fd(1) / gd(1) - fd(0) * gd(2) / (2.0 * gd(1).powi(2)),
        2 => {
            let (g2, g3, g4) = (gd(2), gd(3), gd(4));
            fd(2) / g2 - 2.0 * fd(1) * g3 / (3.0 * g2.powi(2))
                + fd(0) * (2.0 * g3.powi(2) / (9.0 * g2.powi(3)) - g4 / (6.0 * g2.powi(2)))
        }
        3 => {
            let (g3, g4, g5, g6) = (gd(3), gd(4), gd(5), gd(6));
            fd(3) / g3 - 3.0 * fd(2) * g4 / (4.0 * g3.powi(2))
                + fd(1) * (3.0 * g4.powi(2) / (8.0 * g3.powi(3)) - 3.0 * g5 / (10.0 * g3.powi(2)))
                + fd(0)
                    * (-g6 / (20.0 * g3.powi(2)) - 3.0 * g4.powi(3) / (32.0 * g3.powi(4))
                        + 3.0 * g5 * g4 / (20.0 * g3.powi(3)))
        }
        _ => {
            let (g4, g5, g6, g7, g8) = (gd(4), gd(5), gd(6), gd(7), gd(8));
            fd(4) / g4 - 4.0 * fd(3) * g5 / (5.0 * g4.powi(2))
                + fd(2) * (12.0 * g5.powi(2) / (25.0 * g4.powi(3)) - 2.0 * g6 / (5.0 * g4.powi(2)))
                + fd(1)
                    * (-4.0 * g7 / (35.0 * g4.powi(2)) - 24.0 * g5.powi(3) / (125.0 * g4.powi(4))
                        + 8.0 * g6 * g5 / (25.0 * g4.powi(3)))
                + fd(0)
                    * (-g8 / (70.0 * g4.powi(2))
                        + 2.0 * g6.powi(2) / (75.0 * g4.powi(3))
                        + 24.0 * g5.powi(4) / (625.0 * g4.powi(5))
                        + 8.0 * g7 * g5 / (175.0 * g4.powi(3))
                        - 12.0 * g6 * g5.powi(2) / (125.0 * g4.powi(4)))
        }
    };
    finite_result(value, RegLimMethod::Corollary, 1, 0.0)
}

/// Constant Laurent coefficient of `w` at `lambda0` as the mean of `w` over
/// the circle `|lambda - lambda0| = rho`, doubling the grid from `grid`.
pub fn reglim_contour_oracle(
    w: impl Fn(C64) -> C64,
    lambda0: C64,
    rho: f64,
    grid: usize,
    tol: f64,
) -> Result<RegLimResult> {
    if grid < 16 {
        return Err(Error::Domain(format!("contour grid must be at least 16, got {grid}")));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain("contour radius must be positive".into()));
    }
    let budget = EvalBudget::unlimited();
    let out = periodic_mean(
        |th| w(lambda0 + C64::from_polar(rho, th)),
        grid,
        Tolerance::new(0.0, tol),
        ORACLE_MAX_GRID,
        &budget,
    )?;
    finite_result(out.value, RegLimMethod::ContourOracle, out.evals as usize, out.error)
}

/// `v^{(n)}(lambda0) / n!`: the regularized limit of `v / (lambda - lambda0)^{n+1}`.
pub fn simple_pole_power(v: &DerivativeOracle, n: usize) -> Result<C64> {
    Ok(v.derivative(n)? / factorial_f64(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn exp_over_lambda() -> (DerivativeOracle, DerivativeOracle) {
        let f = DerivativeOracle::from_callback(re(0.0), 2, |_| re(1.0));
        let g = DerivativeOracle::from_callback(re(0.0), 2, |k| re(if k == 1 { 1.0 } else { 0.0 }));
        (f, g)
    }

    /// cos and sin^2 derivatives at 0.
    fn cos_over_sin2() -> (DerivativeOracle, DerivativeOracle) {
        let f = DerivativeOracle::from_callback(re(0.0), 4, |k| match k % 4 {
            0 => re(1.0),
            2 => re(-1.0),
            _ => re(0.0),
        });
        // sin^2 = (1 - cos 2x)/2
        let g = DerivativeOracle::from_callback(re(0.0), 4, |k| match (k, k % 4) {
            (0, _) => re(0.0),
            (_, 0) => re(-(2f64.powi(k as i32)) / 2.0),
            (_, 2) => re(2f64.powi(k as i32) / 2.0),
            _ => re(0.0),
        });
        (f, g)
    }

    #[test]
    fn elementary_cases_all_routes() {
        let (f, g) = exp_over_lambda();
        for r in [reglim_ratio(&f, &g, 1), reglim_ratio_compositions(&f, &g, 1), reglim_corollary(1, &f, &g)] {
            assert!((r.unwrap().value - re(1.0)).norm() < 1e-15);
        }
        let (f, g) = cos_over_sin2();
        for r in [reglim_ratio(&f, &g, 2), reglim_ratio_compositions(&f, &g, 2), reglim_corollary(2, &f, &g)] {
            assert!((r.unwrap().value - re(-1.0 / 6.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn contour_oracle_examples() {
        let v = reglim_contour_oracle(|l| l.exp(), re(0.0), 0.5, 64, 1e-12).unwrap();
        assert!((v.value - re(1.0)).norm() < 1e-14);
        let v = reglim_contour_oracle(|l| l.cos() / l.sin().powi(2), re(0.0), 0.5, 64, 1e-12).unwrap();
        assert!((v.value - re(-1.0 / 6.0)).norm() < 1e-13);
        let v = reglim_contour_oracle(|l| 1.0 / l, re(0.0), 0.5, 64, 1e-12).unwrap();
        assert!(v.value.norm() < 1e-15);
        assert!(reglim_contour_oracle(|l| l, re(0.0), 0.5, 8, 1e-12).is_err());
    }

    #[test]
    fn wrong_order_and_degenerate_numerator() {
        let (f, g) = cos_over_sin2();
        assert!(matches!(reglim_ratio(&f, &g, 1), Err(Error::WrongOrder(_))));
        let zero_f = DerivativeOracle::from_callback(re(0.0), 4, |k| re(if k == 1 { 1.0 } else { 0.0 }));
        assert!(matches!(reglim_ratio(&zero_f, &g, 2), Err(Error::Precondition(_))));
        // stating order 3 for a double zero is caught by the g'' check
        let g3 =
            DerivativeOracle::from_callback(re(0.0), 6, |k| g.derivative(k.min(4)).unwrap() * (k <= 4) as u8 as f64);
        let f3 = DerivativeOracle::from_callback(re(0.0), 3, |k| f.derivative(k).unwrap());
        assert!(matches!(reglim_ratio(&f3, &g3, 3), Err(Error::WrongOrder(_))));
        assert!(matches!(reglim_corollary(5, &f, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn cauchy_derivatives_of_exp() {
        let d = cauchy_derivatives(&|z: C64| z.exp(), re(0.3), 0.5, 6).unwrap();
        for v in d {
            assert!((v - re(0.3f64.exp())).norm() < 1e-10);
        }
    }

    #[test]
    fn simple_pole_power_examples() {
        let one = DerivativeOracle::from_callback(re(0.0), 2, |k| re(if k == 0 { 1.0 } else { 0.0 }));
        assert_eq!(simple_pole_power(&one, 2).unwrap(), re(0.0));
        let e = DerivativeOracle::from_callback(re(0.0), 3, |_| re(1.0));
        assert!((simple_pole_power(&e, 3).unwrap() - re(1.0 / 6.0)).norm() < 1e-16);
        assert!(matches!(simple_pole_power(&e, 4), Err(Error::Precondition(_))));
        // omega^{-nu} in nu: first derivative at 0 is -Log omega
        let omega = C64::new(0.3, 0.4);
        let v = DerivativeOracle::cauchy(re(0.0), 1, CAUCHY_RADIUS, |nu| (-nu * omega.ln()).exp()).unwrap();
        assert!((simple_pole_power(&v, 1).unwrap() + omega.ln()).norm() < 1e-13);
        let _ = PI;
    }
}
