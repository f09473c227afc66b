use super::ddouble::DdComplex;
use crate::error::{Error, Result};
use crate::C64;

/// Largest `|z|` accepted by [`bessel_j0`].
pub const J0_WINDOW: f64 = 40.0;

/// Bessel function J0 from its power series `sum (-z^2/4)^k / (k!)^2`.
///
/// Terms reach `I0(|z|)` in size, so the sum is accumulated in double-double
/// arithmetic; the result is accurate to a few ulps of `|J0(z)|` up to
/// `|z| = 25` and degrades gracefully to the window edge.
pub fn bessel_j0(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("J0 argument must be finite".into()));
    }
    if z.norm() > J0_WINDOW {
        return Err(Error::Range(format!("|z| = {} exceeds the J0 series window {J0_WINDOW}", z.norm())));
    }
    let zz = DdComplex::new(z.re, z.im) * DdComplex::new(z.re, z.im);
    let w = DdComplex { re: zz.re.neg(), im: zz.im.neg() }.div_f64(4.0);
    let mut term = DdComplex::new(1.0, 0.0);
    let mut sum = term;
    let half = 0.5 * z.norm();
    for k in 1..400 {
        let kk = (k * k) as f64;
        term = (term * w).div_f64(kk);
        sum = sum + term;
        if (k as f64) > half && term.norm_f64() <= 1e-34 * sum.norm_f64().max(1e-300) {
            break;
        }
    }
    Ok(C64::new(sum.re.to_f64(), sum.im.to_f64()))
}
