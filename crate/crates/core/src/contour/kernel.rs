use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::specialfun::{bessel_j0, complex_gamma, zeta_integer, EULER_GAMMA};
use crate::C64;

use super::keyhole::Upper;

/// Number of Taylor coefficients tabulated for built-in kernels.
pub const TAYLOR_LEN: usize = 160;

/// Behaviour of `k(t)` as `t -> infinity`, used to truncate or map the
/// contour legs when the upper limit is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `|k(t)| <~ e^{-rate t}`.
    Exponential { rate: f64 },
    /// `|k(t)| <~ 1/Gamma(1 + t)`.
    ReciprocalGamma,
    /// `|k(t)| <~ t^order`; the integrand must still decay through `t^{-lambda}`.
    Algebraic { order: f64 },
}

type EvalFn = dyn Fn(C64) -> C64 + Send + Sync;

/// An analytic kernel `k` with its Taylor data at the origin.
#[derive(Clone)]
pub struct Kernel {
    id: String,
    eval: Arc<EvalFn>,
    taylor: Arc<Vec<C64>>,
    rho0: f64,
    decay: Decay,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel").field("id", &self.id).field("rho0", &self.rho0).field("decay", &self.decay).finish()
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

impl Kernel {
    /// General constructor. `taylor` lists `a_0, a_1, ...`; missing entries are zero.
    pub fn new(
        id: impl Into<String>,
        eval: impl Fn(C64) -> C64 + Send + Sync + 'static,
        taylor: Vec<C64>,
        rho0: f64,
        decay: Decay,
    ) -> Result<Self> {
        if !(rho0 > 0.0) {
            return Err(Error::Domain("analyticity radius must be positive".into()));
        }
        if taylor.first().is_none_or(|a0| *a0 == C64::new(0.0, 0.0)) {
            return Err(Error::Domain("finite-part kernels need k(0) != 0".into()));
        }
        Ok(Self { id: id.into(), eval: Arc::new(eval), taylor: Arc::new(taylor), rho0, decay })
    }

    /// `k = 1`.
    pub fn constant() -> Self {
        Self::new("const", |_| re(1.0), vec![re(1.0)], f64::INFINITY, Decay::Algebraic { order: 0.0 })
            .expect("valid kernel")
    }

    /// `k = e^{-beta z}`.
    pub fn exponential(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("exp kernel needs beta > 0, got {beta}")));
        }
        let mut taylor = Vec::with_capacity(TAYLOR_LEN);
        let mut a = 1.0;
        for l in 0..TAYLOR_LEN {
            taylor.push(re(a));
            a *= -beta / (l + 1) as f64;
        }
        Self::new(
            format!("exp({beta})"),
            move |z| (-beta * z).exp(),
            taylor,
            f64::INFINITY,
            Decay::Exponential { rate: beta },
        )
    }

    /// Polynomial `sum c_l z^l`.
    pub fn polynomial(coeffs: Vec<C64>) -> Result<Self> {
        let degree = coeffs.len().saturating_sub(1) as f64;
        let c = coeffs.clone();
        Self::new("poly", move |z| horner(&c, z), coeffs, f64::INFINITY, Decay::Algebraic { order: degree })
    }

    /// `sqrt((a + z)/(b + z))` on the principal branch; analytic for `|z| < min(a, b)`.
    pub fn sqrt_ratio(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Domain("sqrt-ratio kernel needs a, b > 0".into()));
        }
        // sqrt(a/b) (1 + z/a)^{1/2} (1 + z/b)^{-1/2}
        let up = binomial_series(0.5, 1.0 / a, TAYLOR_LEN);
        let down = binomial_series(-0.5, 1.0 / b, TAYLOR_LEN);
        let s = (a / b).sqrt();
        let taylor = (0..TAYLOR_LEN).map(|k| re(s * (0..=k).map(|i| up[i] * down[k - i]).sum::<f64>())).collect();
        Self::new(
            format!("sqrt-ratio({a},{b})"),
            // same ratio, without squaring |z| in the complex division
            move |z| if z.norm() > 1.0 { ((a / z + 1.0) / (b / z + 1.0)).sqrt() } else { ((a + z) / (b + z)).sqrt() },
            taylor,
            a.min(b),
            Decay::Algebraic { order: 0.0 },
        )
    }

    /// `J0(z)^2 / Gamma(1 + z)`.
    pub fn j0sq_recip_gamma() -> Self {
        let j0sq = {
            let mut v = vec![0.0; TAYLOR_LEN];
            let mut t = 1.0;
            for k in 0..TAYLOR_LEN / 2 {
                v[2 * k] = t;
                let kk = (k + 1) as f64;
                t *= -(2.0 * kk) * (2.0 * kk - 1.0) / (kk * kk * kk * kk) / 4.0;
            }
            v
        };
        let rg = recip_gamma_series(TAYLOR_LEN);
        let taylor = (0..TAYLOR_LEN).map(|k| re((0..=k).map(|i| j0sq[i] * rg[k - i]).sum())).collect();
        Self::new(
            "j0sq-recip-gamma",
            |z| {
                let j = bessel_j0(z).unwrap_or(C64::new(f64::NAN, f64::NAN));
                match complex_gamma(1.0 + z) {
                    Ok(g) => j * j / g,
                    // 1/Gamma vanishes at its poles
                    Err(Error::Pole(_)) => C64::new(0.0, 0.0),
                    Err(_) => C64::new(f64::NAN, f64::NAN),
                }
            },
            taylor,
            f64::INFINITY,
            Decay::ReciprocalGamma,
        )
        .expect("valid kernel")
    }

    /// Kernel given only by Taylor coefficients, evaluated by Horner's rule
    /// inside the radius of convergence.
    pub fn from_taylor(id: impl Into<String>, coeffs: Vec<C64>, rho0: f64, decay: Decay) -> Result<Self> {
        let c = coeffs.clone();
        Self::new(id, move |z| horner(&c, z), coeffs, rho0, decay)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.eval)(z)
    }

    /// Taylor coefficient `a_l` (zero past the tabulated range).
    pub fn taylor(&self, l: usize) -> C64 {
        self.taylor.get(l).copied().unwrap_or_default()
    }

    pub fn taylor_len(&self) -> usize {
        self.taylor.len()
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    /// True when every tabulated Taylor coefficient is real.
    pub fn is_real(&self) -> bool {
        self.taylor.iter().all(|a| a.im == 0.0)
    }

    /// Rejects an infinite upper limit when `k(t) ln^n t / t^lambda` is not
    /// integrable at infinity.
    pub fn check_tail(&self, upper: Upper, lambda_re: f64) -> Result<()> {
        match (upper, self.decay) {
            (Upper::Infinite, Decay::Algebraic { order }) if lambda_re - order <= 1.0 => Err(Error::Domain(format!(
                "integral of {} diverges at infinity: needs Re lambda > {}",
                self.id,
                order + 1.0
            ))),
            _ => Ok(()),
        }
    }

    /// Decay exponent of `k(t) t^{-lambda}` at infinity for algebraic kernels.
    pub fn tail_exponent(&self, lambda_re: f64) -> Option<f64> {
        match self.decay {
            Decay::Algebraic { order } => Some(lambda_re - order),
            _ => None,
        }
    }

    /// Truncation abscissa for an infinite upper limit, or `None` when the
    /// leg must be mapped to a finite interval instead.
    pub fn tail_truncation(&self) -> Option<f64> {
        match self.decay {
            Decay::Exponential { rate } => Some(40f64.max(40.0 / rate)),
            Decay::ReciprocalGamma => Some(30.0),
            Decay::Algebraic { .. } => None,
        }
    }
}

fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a)
}

/// Coefficients of `(1 + s z)^p`.
fn binomial_series(p: f64, s: f64, len: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(len);
    let mut c = 1.0;
    for k in 0..len {
        v.push(c);
        c *= (p - k as f64) / (k + 1) as f64 * s;
    }
    v
}

/// Taylor coefficients of `1/Gamma(1 + z) = exp(gamma z - sum_{k>=2} (-1)^k zeta(k) z^k / k)`.
fn recip_gamma_series(len: usize) -> Vec<f64> {
    let mut log = vec![0.0; len];
    if len > 1 {
        log[1] = EULER_GAMMA;
    }
    for (k, slot) in log.iter_mut().enumerate().skip(2) {
        let z = zeta_integer(k as i64).expect("k >= 2");
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        *slot = sign * z / k as f64;
    }
    // exp of a power series: m e_m = sum_k k l_k e_{m-k}
    let mut e = vec![0.0; len];
    e[0] = 1.0;
    for m in 1..len {
        e[m] = (1..=m).map(|k| k as f64 * log[k] * e[m - k]).sum::<f64>() / m as f64;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_sum(k: &Kernel, z: C64) -> C64 {
        (0..k.taylor_len()).rev().fold(C64::new(0.0, 0.0), |acc, l| acc * z + k.taylor(l))
    }

    #[test]
    fn taylor_tables_match_evaluation() {
        let z = C64::new(0.3, 0.2);
        for k in [
            Kernel::constant(),
            Kernel::exponential(2.0).unwrap(),
            Kernel::sqrt_ratio(1.5, 1.0).unwrap(),
            Kernel::j0sq_recip_gamma(),
            Kernel::polynomial(vec![re(1.0), re(-2.0), C64::new(0.0, 0.5)]).unwrap(),
        ] {
            let d = (taylor_sum(&k, z) - k.eval(z)).norm();
            assert!(d < 1e-14, "{} differs by {d}", k.id());
        }
        let j = Kernel::j0sq_recip_gamma();
        let z = re(0.9);
        assert!((taylor_sum(&j, z) - j.eval(z)).norm() < 1e-14);
    }

    #[test]
    fn metadata() {
        assert_eq!(Kernel::exponential(0.5).unwrap().tail_truncation(), Some(80.0));
        assert_eq!(Kernel::j0sq_recip_gamma().tail_truncation(), Some(30.0));
        assert_eq!(Kernel::sqrt_ratio(1.5, 1.0).unwrap().rho0(), 1.0);
        assert!(Kernel::polynomial(vec![re(0.0), re(1.0)]).is_err());
        assert!(Kernel::exponential(-1.0).is_err());
    }
}
