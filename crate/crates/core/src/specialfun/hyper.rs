use super::{finite, is_nonpositive_integer};
use crate::error::{Error, Result};
use crate::C64;

const MAX_TERMS: usize = 200_000;
/// Relative size of the estimated series tail at which summation stops.
const TAIL_TOL: f64 = 1e-16;

fn check(c: C64, z: C64) -> Result<()> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("2F1 series needs |z| < 1, got |z| = {}", z.norm())));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("2F1 lower parameter c = {} is a non-positive integer", c.re)));
    }
    Ok(())
}

/// Sums the Gauss series and up to two derivatives in `b`, returned as
/// `[F, dF/db, d2F/db2]`; only the first `1 + order` entries are meaningful.
fn series(order: usize, a: C64, b: C64, c: C64, z: C64) -> Result<[C64; 3]> {
    check(c, z)?;
    let zero = C64::new(0.0, 0.0);
    let mut t = C64::new(1.0, 0.0);
    // h1 = sum_{i<k} 1/(b+i) = psi(b+k) - psi(b); h2 = sum_{i<k} 1/(b+i)^2
    let (mut h1, mut h2) = (zero, zero);
    let mut sums = [t, zero, zero];
    let mut stalled = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let bk = b + kf;
        if bk == zero {
            // (b)_{k+1} and all later Pochhammer factors vanish; only derivatives survive.
            return Err(Error::Domain("parameter derivative at a terminating b is not supported".into()));
        }
        let ratio = (a + kf) * bk / ((c + kf) * (kf + 1.0)) * z;
        t *= ratio;
        h1 += 1.0 / bk;
        h2 += 1.0 / (bk * bk);
        let terms = [t, t * h1, t * (h1 * h1 - h2)];
        for i in 0..=order {
            sums[i] += terms[i];
        }
        // Geometric tail bound using the current ratio, which tends to |z|.
        let r = ratio.norm().max(z.norm());
        if t == zero {
            return Ok(sums);
        }
        if r < 1.0 {
            let done = (0..=order).all(|i| {
                // derivative terms gain at most a log factor per step
                let growth = 1.0 + (i as f64) / (kf + 1.0);
                terms[i].norm() * growth / (1.0 - r) <= TAIL_TOL * sums[i].norm()
            });
            if done {
                stalled += 1;
                if stalled >= 2 {
                    return Ok(sums);
                }
            } else {
                stalled = 0;
            }
        }
    }
    Err(Error::Convergence(format!("2F1 series did not converge in {MAX_TERMS} terms")))
}

/// Gauss hypergeometric function by its power series, `|z| < 1`.
pub fn gauss_2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    finite(series(0, a, b, c, z)?[0], "2F1")
}

/// First or second derivative of `2F1(a, b; c; z)` with respect to `b`.
pub fn gauss_2f1_db(order: usize, a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if !(1..=2).contains(&order) {
        return Err(Error::Domain(format!("b-derivative order must be 1 or 2, got {order}")));
    }
    finite(series(order, a, b, c, z)?[order], "2F1 parameter derivative")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn closed_form_collapses() {
        let z = C64::new(0.3, -0.2);
        let v = gauss_2f1(re(0.7), re(1.3), re(1.3), z).unwrap();
        assert!((v - (1.0 - z).powf(-0.7)).norm() < 1e-15);
        let w = gauss_2f1(re(1.0), re(1.0), re(2.0), re(0.3)).unwrap();
        assert!((w.re - (-(0.7f64).ln() / 0.3)).abs() < 1e-15);
    }

    #[test]
    fn derivative_vs_richardson_difference() {
        let (a, b, c, z) = (re(0.5), 2.0, re(2.0), re(-0.5));
        assert_eq!(gauss_2f1_db(1, a, re(b), c, re(0.0)).unwrap(), re(0.0));
        let f = |bb: f64| gauss_2f1(a, re(bb), c, z).unwrap();
        let d1 = |h: f64| (f(b + h) - f(b - h)) / (2.0 * h);
        let rich1 = (4.0 * d1(1e-4) - d1(2e-4)) / 3.0;
        let g1 = gauss_2f1_db(1, a, re(b), c, z).unwrap();
        assert!((g1 - rich1).norm() < 1e-7);
        let h = 1e-4;
        let d2 = (f(b + h) - 2.0 * f(b) + f(b - h)) / (h * h);
        let g2 = gauss_2f1_db(2, a, re(b), c, z).unwrap();
        assert!((g2 - d2).norm() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        assert!(gauss_2f1(re(1.0), re(1.0), re(2.0), re(1.0)).is_err());
        assert!(gauss_2f1(re(1.0), re(1.0), re(-2.0), re(0.5)).is_err());
        assert!(gauss_2f1_db(3, re(1.0), re(1.0), re(2.0), re(0.5)).is_err());
    }
}
