//! Hadamard finite-part integrals with logarithmic singularities.
//!
//! The crate evaluates `FP int_0^a k(t) ln^n t / t^lambda dt` through a keyhole
//! contour representation, computes regularized limits of meromorphic
//! ratios, and evaluates the generalized Stieltjes transform
//! `int_0^a k(t) ln^n t / (t^nu (omega^2 + t^2)) dt` together with its small
//! `omega` behaviour.

pub mod combinatorics;
pub mod contour;
pub mod error;
pub mod par;
pub mod quadrature;
pub mod reglim;
pub mod specialfun;
pub mod stieltjes;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
