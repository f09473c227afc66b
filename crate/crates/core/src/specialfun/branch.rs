use std::f64::consts::{PI, TAU};

use crate::C64;

/// Which window the argument lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `ln z`: cut along the positive real axis, argument in `[0, 2pi)`.
    /// The lower lip of the cut is represented with argument exactly `2pi`.
    Cut,
    /// `Log z`: principal branch, argument in `(-pi, pi]`.
    Principal,
}

/// A logarithm carried as `(ln|z|, arg z)` so that the branch is never
/// re-derived from a rounded complex number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedLog {
    ln_modulus: f64,
    arg: f64,
    branch: Branch,
}

impl BranchedLog {
    /// `ln z` with the argument in `[0, 2pi)`.
    pub fn cut(z: C64) -> Self {
        let mut arg = z.im.atan2(z.re);
        if arg < 0.0 {
            arg += TAU;
        }
        if arg >= TAU {
            arg = 0.0;
        }
        Self { ln_modulus: z.norm().ln(), arg, branch: Branch::Cut }
    }

    /// `Log z` with the argument in `(-pi, pi]`.
    pub fn principal(z: C64) -> Self {
        let mut arg = z.im.atan2(z.re);
        if arg <= -PI {
            arg = PI;
        }
        Self { ln_modulus: z.norm().ln(), arg, branch: Branch::Principal }
    }

    /// Point `t > 0` on the upper lip of the cut (argument 0).
    pub fn upper_lip(t: f64) -> Self {
        debug_assert!(t > 0.0);
        Self { ln_modulus: t.ln(), arg: 0.0, branch: Branch::Cut }
    }

    /// Point `t > 0` on the lower lip of the cut (argument `2pi`).
    pub fn lower_lip(t: f64) -> Self {
        debug_assert!(t > 0.0);
        Self { ln_modulus: t.ln(), arg: TAU, branch: Branch::Cut }
    }

    /// Point `r e^{i theta}` with `theta` in `[0, 2pi]`, traversed anticlockwise.
    pub fn on_circle(r: f64, theta: f64) -> Self {
        debug_assert!((0.0..=TAU).contains(&theta));
        Self { ln_modulus: r.ln(), arg: theta, branch: Branch::Cut }
    }

    pub fn ln_modulus(&self) -> f64 {
        self.ln_modulus
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// The logarithm as a complex number.
    pub fn value(&self) -> C64 {
        C64::new(self.ln_modulus, self.arg)
    }

    /// The point `z` itself.
    pub fn point(&self) -> C64 {
        C64::from_polar(self.ln_modulus.exp(), self.arg)
    }

    /// `z^s = exp(s ln z)` on this branch.
    pub fn pow(&self, s: C64) -> C64 {
        (s * self.value()).exp()
    }

    /// `(ln z)^j`.
    pub fn powi(&self, j: usize) -> C64 {
        let v = self.value();
        (0..j).fold(C64::new(1.0, 0.0), |acc, _| acc * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        let below = C64::new(1.0, -1e-3);
        assert!(BranchedLog::cut(below).arg() > 6.28);
        assert_eq!(BranchedLog::principal(below).arg(), (-1e-3f64).atan2(1.0));
        // An argument that rounds to 2pi wraps to 0 to stay inside [0, 2pi).
        assert_eq!(BranchedLog::cut(C64::new(1.0, -1e-300)).arg(), 0.0);
        assert_eq!(BranchedLog::principal(C64::new(-1.0, -0.0)).arg(), PI);
        assert_eq!(BranchedLog::cut(C64::new(2.0, 0.0)).arg(), 0.0);
        assert_eq!(BranchedLog::cut(C64::new(-1.0, 0.0)).arg(), PI);
    }

    #[test]
    fn lower_lip_picks_up_the_monodromy() {
        let lam = C64::new(1.5, 0.0);
        let up = BranchedLog::upper_lip(2.0).pow(-lam);
        let down = BranchedLog::lower_lip(2.0).pow(-lam);
        let phase = (C64::new(0.0, -TAU) * lam).exp();
        assert!((down - up * phase).norm() < 1e-15);
        assert!((BranchedLog::lower_lip(2.0).point() - C64::new(2.0, 0.0)).norm() < 1e-14);
    }
}
