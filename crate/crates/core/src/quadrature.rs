//! Quadrature rules: globally adaptive Gauss-Legendre, tanh-sinh for endpoint
//! singularities, and the periodic trapezoid rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::C64;

/// Shared counter of integrand evaluations with an optional hard cap.
#[derive(Debug, Default)]
pub struct EvalBudget {
    used: AtomicU64,
    cap: Option<u64>,
}

impl EvalBudget {
    pub fn new(cap: Option<u64>) -> Self {
        Self { used: AtomicU64::new(0), cap }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn charge(&self, n: u64) -> Result<()> {
        let total = self.used.fetch_add(n, AtomicOrdering::Relaxed) + n;
        match self.cap {
            Some(cap) if total > cap => Err(Error::Budget(cap)),
            _ => Ok(()),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(AtomicOrdering::Relaxed)
    }
}

/// Absolute/relative error target: met when `err <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn target(&self, value: C64) -> f64 {
        self.abs.max(self.rel * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutput {
    pub value: C64,
    pub error: f64,
    pub evals: u64,
}

fn checked(v: C64, x: f64) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("integrand is not finite at {x}")))
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    fn apply<F: Fn(f64) -> Result<C64>>(&self, f: &F, a: f64, b: f64) -> Result<C64> {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = C64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += *w * f(c + h * x)?;
        }
        Ok(s * h)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rules() -> &'static (GaussRule, GaussRule) {
    static R: OnceLock<(GaussRule, GaussRule)> = OnceLock::new();
    R.get_or_init(|| (GaussRule::new(15), GaussRule::new(21)))
}

/// Evaluations spent per panel by [`adaptive_gauss`].
pub const GAUSS_PANEL_EVALS: u64 = 36;

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive Gauss-Legendre on `[a, b]` (finite). Each panel is
/// integrated with 21 points and its error estimated by the 15-point rule.
pub fn adaptive_gauss<F>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    initial_panels: usize,
    max_panels: usize,
    budget: &EvalBudget,
) -> Result<QuadOutput>
where
    F: Fn(f64) -> C64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("adaptive_gauss needs finite limits".into()));
    }
    let start = budget.used();
    if a == b {
        return Ok(QuadOutput { value: C64::new(0.0, 0.0), error: 0.0, evals: 0 });
    }
    let g = |x: f64| checked(f(x), x);
    let (lo, hi) = rules();
    let panel = |a: f64, b: f64| -> Result<Panel> {
        budget.charge(GAUSS_PANEL_EVALS)?;
        let value = hi.apply(&g, a, b)?;
        let coarse = lo.apply(&g, a, b)?;
        Ok(Panel { a, b, value, error: (value - coarse).norm() })
    };
    let n0 = initial_panels.max(1);
    let mut heap = BinaryHeap::new();
    for i in 0..n0 {
        let x0 = a + (b - a) * i as f64 / n0 as f64;
        let x1 = if i + 1 == n0 { b } else { a + (b - a) * (i + 1) as f64 / n0 as f64 };
        heap.push(panel(x0, x1)?);
    }
    loop {
        // Summing in sorted order keeps the reduction deterministic.
        let mut all: Vec<&Panel> = heap.iter().collect();
        all.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value: C64 = all.iter().map(|p| p.value).sum();
        let error: f64 = all.iter().map(|p| p.error).sum();
        let floor = 1e3 * f64::EPSILON * all.iter().map(|p| p.value.norm()).sum::<f64>();
        let evals = budget.used() - start;
        if error <= tol.target(value) {
            return Ok(QuadOutput { value, error, evals });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > max_panels || mid <= worst.a || mid >= worst.b {
            // Resolution exhausted: accept when the remaining error is at roundoff level.
            if error <= floor.max(tol.target(value)) {
                return Ok(QuadOutput { value, error, evals });
            }
            return Err(Error::Convergence(format!(
                "adaptive Gauss on [{a}, {b}] reached {max_panels} panels with error {error:.3e}"
            )));
        }
        heap.push(panel(worst.a, mid)?);
        heap.push(panel(mid, worst.b)?);
    }
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` with both distances computed
/// without cancellation so that endpoint singularities can be evaluated
/// accurately.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: Tolerance, max_level: usize, budget: &EvalBudget) -> Result<QuadOutput>
where
    F: Fn(f64, f64, f64) -> C64,
{
    let start = budget.used();
    let len = b - a;
    let half = 0.5 * len;
    // Node at parameter t; returns the weighted contribution, or None past the underflow edge.
    let node = |t: f64| -> Result<Option<C64>> {
        let s = FRAC_PI_2 * t.sinh();
        let da = len / (1.0 + (-2.0 * s).exp());
        let db = len / (1.0 + (2.0 * s).exp());
        if da <= 0.0 || db <= 0.0 || !da.is_finite() || !db.is_finite() {
            return Ok(None);
        }
        let x = if da < db { a + da } else { b - db };
        let cosh_s = s.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cosh_s * cosh_s);
        if w == 0.0 {
            return Ok(None);
        }
        Ok(Some(w * checked(f(x, da, db), x)?))
    };
    const T_MAX: f64 = 6.5;
    let mut h = 0.5;
    let mut sum = node(0.0)?.unwrap_or_default();
    let mut count = 1u64;
    // level 0: all multiples of h
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        let t = k as f64 * h;
        for tt in [t, -t] {
            if let Some(v) = node(tt)? {
                sum += v;
            }
            count += 1;
        }
        k += 1;
    }
    budget.charge(count)?;
    let mut estimate = sum * h;
    for _level in 1..=max_level {
        h *= 0.5;
        let mut added = C64::new(0.0, 0.0);
        let mut count = 0u64;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            let t = k as f64 * h;
            for tt in [t, -t] {
                if let Some(v) = node(tt)? {
                    added += v;
                }
                count += 1;
            }
            k += 2;
        }
        budget.charge(count)?;
        sum += added;
        let next = sum * h;
        let diff = (next - estimate).norm();
        estimate = next;
        if diff <= tol.target(estimate) {
            return Ok(QuadOutput { value: estimate, error: diff, evals: budget.used() - start });
        }
    }
    Err(Error::Convergence(format!("tanh-sinh on [{a}, {b}] did not converge in {max_level} levels")))
}

/// Mean value `(1/2pi) int_0^{2pi} f(theta) dtheta` of a periodic function
/// by the trapezoid rule, doubling from `n0` points up to `max_n`.
pub fn periodic_mean<F>(f: F, n0: usize, tol: Tolerance, max_n: usize, budget: &EvalBudget) -> Result<QuadOutput>
where
    F: Fn(f64) -> C64,
{
    let start = budget.used();
    let mut n = n0.max(4);
    budget.charge(n as u64)?;
    let mut sum = C64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for i in 0..n {
        let th = TAU * i as f64 / n as f64;
        let v = checked(f(th), th)?;
        sum += v;
        abs_sum += v.norm();
    }
    let mut mean = sum / n as f64;
    while 2 * n <= max_n {
        budget.charge(n as u64)?;
        for i in 0..n {
            let th = TAU * (2 * i + 1) as f64 / (2 * n) as f64;
            let v = checked(f(th), th)?;
            sum += v;
            abs_sum += v.norm();
        }
        n *= 2;
        let next = sum / n as f64;
        let diff = (next - mean).norm();
        mean = next;
        let roundoff = 64.0 * f64::EPSILON * abs_sum / n as f64;
        if diff <= tol.target(mean).max(roundoff) {
            return Ok(QuadOutput { value: mean, error: diff, evals: budget.used() - start });
        }
    }
    Err(Error::Convergence(format!("periodic trapezoid did not converge with {n} points")))
}
