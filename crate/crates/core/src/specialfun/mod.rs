//! Complex special functions: Gamma family, integer zeta, J0, Gauss 2F1 with
//! parameter derivatives, derivatives of sec/csc, and explicit log branches.

mod bessel;
mod branch;
mod ddouble;
mod gamma;
mod hyper;
mod trig;
mod zeta;

pub use bessel::{bessel_j0, J0_WINDOW};
pub use branch::{Branch, BranchedLog};
pub use gamma::{complex_gamma, digamma, ln_gamma, polygamma, EULER_GAMMA};
pub use hyper::{gauss_2f1, gauss_2f1_db};
pub use trig::{csc_derivative, sec_derivative};
pub use zeta::zeta_integer;

use crate::error::{Error, Result};
use crate::C64;

/// True when `z` is exactly a non-positive integer.
pub(crate) fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Rejects NaN or infinite results instead of passing them on silently.
pub(crate) fn finite(z: C64, what: &str) -> Result<C64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Range(format!("{what} is not representable in double precision")))
    }
}
