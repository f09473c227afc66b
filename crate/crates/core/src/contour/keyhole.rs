use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::quadrature::{adaptive_gauss, tanh_sinh, EvalBudget, QuadOutput, Tolerance};
use crate::specialfun::BranchedLog;
use crate::C64;

use super::kernel::Kernel;

/// Upper integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    Infinite,
}

impl Upper {
    pub fn value(self) -> f64 {
        match self {
            Upper::Finite(a) => a,
            Upper::Infinite => f64::INFINITY,
        }
    }
}

/// Quadrature rule for the straight legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LegRule {
    #[default]
    AdaptiveGauss,
    TanhSinh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Initial number of Gauss panels on the circle.
    pub circle_grid_init: usize,
    pub leg_rule: LegRule,
    /// Panel cap for adaptive Gauss (levels for tanh-sinh are fixed).
    pub max_refinements: usize,
    /// Overrides the default circle radius when set.
    pub epsilon: Option<f64>,
    /// Cap on integrand evaluations per top-level call.
    pub max_evals: Option<u64>,
    pub execution: Execution,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            circle_grid_init: 4,
            leg_rule: LegRule::AdaptiveGauss,
            max_refinements: 4000,
            epsilon: None,
            max_evals: None,
            execution: Execution::default(),
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.abs_tol, self.rel_tol)
    }

    pub fn budget(&self) -> EvalBudget {
        EvalBudget::new(self.max_evals)
    }
}

/// Keyhole geometry: from `a` above the cut to `epsilon`, around the circle
/// `|z| = epsilon` anticlockwise, and back to `a` below the cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyholeContour {
    pub epsilon: f64,
    pub upper: Upper,
    /// Truncation abscissa used for an infinite upper limit; `None` maps
    /// the leg onto a finite interval instead.
    pub tail: Option<f64>,
    /// Exponent `p` of the map `t = epsilon u^{-p}` used when `tail` is `None`.
    pub map_power: f64,
}

/// Default circle radius `min(1, a/2, rho0/2)`.
pub fn default_epsilon(upper: Upper, rho0: f64) -> f64 {
    1f64.min(upper.value() / 2.0).min(rho0 / 2.0)
}

impl KeyholeContour {
    /// Builds the contour for `kernel`, honouring an explicit `epsilon`.
    pub fn for_kernel(kernel: &Kernel, upper: Upper, epsilon: Option<f64>) -> Result<Self> {
        let eps = epsilon.unwrap_or_else(|| default_epsilon(upper, kernel.rho0()));
        let tail = match upper {
            Upper::Finite(_) => None,
            Upper::Infinite => kernel.tail_truncation().map(|t| t.max(10.0 * eps)),
        };
        let c = Self { epsilon: eps, upper, tail, map_power: 1.0 };
        c.validate(kernel.rho0())?;
        Ok(c)
    }

    /// [`KeyholeContour::for_kernel`] with the tail map tuned to
    /// `k(t) t^{-lambda}`.
    pub fn for_integrand(kernel: &Kernel, upper: Upper, epsilon: Option<f64>, lambda_re: f64) -> Result<Self> {
        let c = Self::for_kernel(kernel, upper, epsilon)?;
        Ok(match kernel.tail_exponent(lambda_re) {
            Some(e) => c.with_tail_decay(e),
            None => c,
        })
    }

    /// Sets the tail map so that an integrand decaying like `t^{-lambda_eff}`
    /// becomes bounded and nonzero at `u = 0`.
    pub fn with_tail_decay(mut self, lambda_eff: f64) -> Self {
        if lambda_eff > 1.0 {
            self.map_power = (1.0 / (lambda_eff - 1.0)).clamp(0.05, 20.0);
        }
        self
    }

    pub fn validate(&self, rho0: f64) -> Result<()> {
        let a = self.upper.value();
        if !(a > 0.0) {
            return Err(Error::Domain(format!("upper limit must be positive, got {a}")));
        }
        if !(self.epsilon > 0.0 && self.epsilon < a && self.epsilon < rho0) {
            return Err(Error::Domain(format!(
                "circle radius {} must lie in (0, min(a, rho0)) = (0, {})",
                self.epsilon,
                a.min(rho0)
            )));
        }
        if let Some(t) = self.tail {
            if t < 10.0 * self.epsilon {
                return Err(Error::Domain("tail truncation must be at least 10 epsilon".into()));
            }
        }
        Ok(())
    }
}

/// Per-leg breakdown of a keyhole integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyholeValue {
    pub value: C64,
    pub est_error: f64,
    pub upper_leg: C64,
    pub circle: C64,
    pub lower_leg: C64,
    pub evals: u64,
}

/// Integrates `f(t) dt` over `[eps, a]` (or `[eps, inf)`) along the real axis.
pub(crate) fn real_leg<F>(
    f: F,
    contour: &KeyholeContour,
    cfg: &QuadratureConfig,
    budget: &EvalBudget,
) -> Result<QuadOutput>
where
    F: Fn(f64) -> C64 + Sync,
{
    let eps = contour.epsilon;
    let tol = cfg.tolerance();
    let end = match (contour.upper, contour.tail) {
        (Upper::Finite(a), _) => a,
        (Upper::Infinite, Some(t)) => t,
        (Upper::Infinite, None) => {
            // t = eps u^{-p} maps [eps, inf) onto (0, 1]
            let p = contour.map_power;
            return tanh_sinh(
                |_, u, _| {
                    if u == 0.0 {
                        return C64::new(0.0, 0.0);
                    }
                    let t = eps * u.powf(-p);
                    let v = f(t) * (p * t / u);
                    if v.re.is_finite() && v.im.is_finite() {
                        v
                    } else {
                        C64::new(0.0, 0.0)
                    }
                },
                0.0,
                1.0,
                tol,
                12,
                budget,
            );
        }
    };
    match cfg.leg_rule {
        LegRule::AdaptiveGauss => {
            let panels = ((end / eps).log2().ceil().max(1.0) as usize).min(64);
            // Geometric panel boundaries resolve the t^{-lambda} scale near eps.
            let bounds: Vec<f64> = (0..=panels)
                .map(|i| if i == panels { end } else { eps * (end / eps).powf(i as f64 / panels as f64) })
                .collect();
            let parts = par::try_map_indexed(Execution::Sequential, panels, |i| {
                adaptive_gauss(
                    &f,
                    bounds[i],
                    bounds[i + 1],
                    Tolerance::new(tol.abs / panels as f64, tol.rel),
                    1,
                    cfg.max_refinements,
                    budget,
                )
            })?;
            let mut out = QuadOutput { value: C64::new(0.0, 0.0), error: 0.0, evals: 0 };
            for p in parts {
                out.value += p.value;
                out.error += p.error;
                out.evals += p.evals;
            }
            Ok(out)
        }
        LegRule::TanhSinh => tanh_sinh(|x, _, _| f(x), eps, end, tol, 12, budget),
    }
}

/// Keyhole integral of `integrand(z, ln z)`; the branch of `ln z` on each
/// leg is set explicitly (argument 0 above the cut, `2pi` below it).
pub fn keyhole_quadrature<F>(integrand: F, contour: &KeyholeContour, cfg: &QuadratureConfig) -> Result<KeyholeValue>
where
    F: Fn(C64, &BranchedLog) -> C64 + Sync,
{
    let budget = cfg.budget();
    keyhole_with_budget(&integrand, contour, cfg, &budget)
}

pub(crate) fn keyhole_with_budget<F>(
    integrand: &F,
    contour: &KeyholeContour,
    cfg: &QuadratureConfig,
    budget: &EvalBudget,
) -> Result<KeyholeValue>
where
    F: Fn(C64, &BranchedLog) -> C64 + Sync,
{
    cfg.validate()?;
    let eps = contour.epsilon;
    let start = budget.used();
    let upper = || real_leg(|t| integrand(C64::new(t, 0.0), &BranchedLog::upper_lip(t)), contour, cfg, budget);
    let lower = || real_leg(|t| integrand(C64::new(t, 0.0), &BranchedLog::lower_lip(t)), contour, cfg, budget);
    // The circle integrand is not periodic in theta for non-integer powers or
    // logarithms, so it gets the adaptive rule rather than the trapezoid.
    let circle = || {
        adaptive_gauss(
            |th| {
                let lz = BranchedLog::on_circle(eps, th);
                let z = C64::from_polar(eps, th);
                integrand(z, &lz) * C64::new(0.0, 1.0) * z
            },
            0.0,
            TAU,
            cfg.tolerance(),
            cfg.circle_grid_init,
            cfg.max_refinements,
            budget,
        )
    };
    let ((up, low), circ) = par::join(cfg.execution, || par::join(cfg.execution, upper, lower), circle);
    let (up, low, circ) = (up?, low?, circ?);
    // upper leg runs from a down to eps
    let value = -up.value + circ.value + low.value;
    Ok(KeyholeValue {
        value,
        est_error: up.error + circ.error + low.error,
        upper_leg: -up.value,
        circle: circ.value,
        lower_leg: low.value,
        evals: budget.used() - start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfun::complex_gamma;

    #[test]
    fn closed_contour_cases() {
        let cfg = QuadratureConfig::default();
        let c = KeyholeContour { epsilon: 1.0, upper: Upper::Finite(2.0), tail: None, map_power: 1.0 };
        let one = keyhole_quadrature(|_, _| C64::new(1.0, 0.0), &c, &cfg).unwrap();
        assert!(one.value.norm() < 1e-14);
        let inv = keyhole_quadrature(|z, _| 1.0 / z, &c, &cfg).unwrap();
        assert!((inv.value - C64::new(0.0, TAU)).norm() < 1e-13);
    }

    #[test]
    fn exponential_over_power() {
        let cfg = QuadratureConfig::default();
        let c = KeyholeContour { epsilon: 0.5, upper: Upper::Infinite, tail: Some(40.0), map_power: 1.0 };
        let lam = C64::new(1.5, 0.0);
        let v = keyhole_quadrature(|z, lz| (-z).exp() * lz.pow(-lam), &c, &cfg).unwrap();
        let phase = (C64::new(0.0, -TAU) * lam).exp() - 1.0;
        let g = complex_gamma(C64::new(-0.5, 0.0)).unwrap();
        assert!((v.value / phase - g).norm() < 1e-12 * g.norm());
    }

    #[test]
    fn contour_validation() {
        let k = Kernel::sqrt_ratio(1.5, 1.0).unwrap();
        assert!(KeyholeContour::for_kernel(&k, Upper::Infinite, Some(1.2)).is_err());
        let c = KeyholeContour::for_kernel(&k, Upper::Infinite, None).unwrap();
        assert_eq!(c.epsilon, 0.5);
        assert_eq!(c.tail, None);
    }
}
