//! Exact Stirling, Bernoulli and Euler number families with memoized tables.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::partitions::{compositions, factorial_big};
use crate::error::{Error, Result};

/// Exact rational: always reduced with a positive denominator.
pub type Rational = BigRational;

/// Exact binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    factorial_big(n)
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k > n {
        Err(Error::Domain(format!("index k = {k} exceeds n = {n}")))
    } else {
        Ok(())
    }
}

/// Triangular table filled row by row; `rows[n][k]` for `k <= n`.
struct Triangle {
    rows: RwLock<Vec<Vec<BigInt>>>,
    next: fn(&[BigInt], usize) -> Vec<BigInt>,
}

impl Triangle {
    fn get(&self, n: usize, k: usize) -> BigInt {
        if let Some(row) = self.rows.read().expect("table poisoned").get(n) {
            return row[k].clone();
        }
        let mut rows = self.rows.write().expect("table poisoned");
        while rows.len() <= n {
            let m = rows.len();
            let row = (self.next)(rows.last().map(Vec::as_slice).unwrap_or(&[]), m);
            rows.push(row);
        }
        rows[n][k].clone()
    }
}

fn stirling2_row(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    (0..=n)
        .map(|k| {
            let a = if k < n { BigInt::from(k) * &prev[k] } else { BigInt::zero() };
            let b = if k >= 1 { prev[k - 1].clone() } else { BigInt::zero() };
            a + b
        })
        .collect()
}

fn stirling1_row(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    // s(n, k) = s(n-1, k-1) - (n-1) s(n-1, k)
    (0..=n)
        .map(|k| {
            let a = if k >= 1 { prev[k - 1].clone() } else { BigInt::zero() };
            let b = if k < n { BigInt::from(n - 1) * &prev[k] } else { BigInt::zero() };
            a - b
        })
        .collect()
}

fn stirling2_table() -> &'static Triangle {
    static T: OnceLock<Triangle> = OnceLock::new();
    T.get_or_init(|| Triangle { rows: RwLock::new(Vec::new()), next: stirling2_row })
}

fn stirling1_table() -> &'static Triangle {
    static T: OnceLock<Triangle> = OnceLock::new();
    T.get_or_init(|| Triangle { rows: RwLock::new(Vec::new()), next: stirling1_row })
}

/// Stirling number of the second kind S(n, k).
pub fn stirling_second(n: usize, k: usize) -> Result<BigInt> {
    check_k(n, k)?;
    Ok(stirling2_table().get(n, k))
}

/// S(n, k) from the alternating binomial sum `(1/k!) sum_j (-1)^j C(k,j) (k-j)^n`.
pub fn stirling_second_binomial(n: usize, k: usize) -> Result<BigInt> {
    check_k(n, k)?;
    let mut acc = BigInt::zero();
    for j in 0..=k {
        let term = binomial(k, j) * BigInt::from(k - j).pow(n as u32);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / factorial(k))
}

/// S(n, k) as `n!/k!` times the sum over compositions of `n` into `k`
/// positive parts of `1 / prod r_j!`.
pub fn stirling_second_compositions(n: usize, k: usize) -> Result<BigInt> {
    check_k(n, k)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    if k == 0 {
        return Ok(BigInt::zero());
    }
    let mut acc = Rational::zero();
    for parts in &compositions(n)[k - 1] {
        let den: BigInt = parts.iter().map(|&r| factorial(r)).product();
        acc += Rational::new(BigInt::one(), den);
    }
    let value = acc * Rational::new(factorial(n), factorial(k));
    debug_assert!(value.is_integer());
    Ok(value.to_integer())
}

/// Signed Stirling number of the first kind s(n, k).
pub fn stirling_first_signed(n: usize, k: usize) -> Result<BigInt> {
    check_k(n, k)?;
    Ok(stirling1_table().get(n, k))
}

fn rational_cache() -> &'static RwLock<HashMap<(u8, usize), Vec<Rational>>> {
    static C: OnceLock<RwLock<HashMap<(u8, usize), Vec<Rational>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Looks up entry `n` of the sequence tagged `(family, param)`, extending the
/// cached prefix with `extend` when it is too short.
fn cached(family: u8, param: usize, n: usize, extend: impl Fn(usize) -> Vec<Rational>) -> Rational {
    if let Some(v) = rational_cache().read().expect("cache poisoned").get(&(family, param)) {
        if let Some(x) = v.get(n) {
            return x.clone();
        }
    }
    // Grow geometrically so repeated calls stay cheap; concurrent fills are idempotent.
    let len = (n + 1).max(16).next_power_of_two();
    let seq = extend(len);
    let value = seq[n].clone();
    let mut w = rational_cache().write().expect("cache poisoned");
    let entry = w.entry((family, param)).or_default();
    if entry.len() < seq.len() {
        *entry = seq;
    }
    value
}

/// Power series `(z / (e^z - 1))^m` truncated to `len` terms (ordinary coefficients).
fn bernoulli_power_series(m: usize, len: usize) -> Vec<Rational> {
    // (e^z - 1)/z = sum z^k / (k+1)!
    let base: Vec<Rational> = (0..len).map(|k| Rational::new(BigInt::one(), factorial(k + 1))).collect();
    let inv = series_inverse(&base);
    let mut acc = vec![Rational::zero(); len];
    acc[0] = Rational::one();
    for _ in 0..m {
        acc = series_mul(&acc, &inv);
    }
    acc
}

pub(crate) fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().min(b.len());
    (0..len).map(|k| (0..=k).fold(Rational::zero(), |s, i| s + &a[i] * &b[k - i])).collect()
}

pub(crate) fn series_inverse(a: &[Rational]) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); a.len()];
    r[0] = a[0].recip();
    for k in 1..a.len() {
        let s = (1..=k).fold(Rational::zero(), |s, i| s + &a[i] * &r[k - i]);
        r[k] = -s / &a[0];
    }
    r
}

/// Bernoulli number B_n with B_1 = -1/2.
pub fn bernoulli_number(n: usize) -> Rational {
    cached(0, 0, n, |len| {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        b.push(Rational::one());
        for m in 1..len {
            let s = (0..m).fold(Rational::zero(), |s, k| s + Rational::from(binomial(m + 1, k)) * &b[k]);
            b.push(-s / Rational::from(BigInt::from(m + 1)));
        }
        b
    })
}

/// Bernoulli number of order `m`: coefficient of z^n/n! in (z/(e^z-1))^m.
pub fn bernoulli_higher_order(m: usize, n: usize) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Domain("Bernoulli order m must be positive".into()));
    }
    Ok(cached(1, m, n, |len| {
        bernoulli_power_series(m, len).into_iter().enumerate().map(|(k, c)| c * Rational::from(factorial(k))).collect()
    }))
}

/// B_k^{(l+1)} from the signed composition sum over Stirling numbers
/// `S(r + l + 1, l + 1)`; an independent route to [`bernoulli_higher_order`].
pub fn bernoulli_higher_order_compositions(l: usize, k: usize) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for (t_minus_1, group) in compositions(k).iter().enumerate() {
        let sign = if (t_minus_1 + 1) % 2 == 0 { 1 } else { -1 };
        for parts in group {
            let mut term = Rational::from(factorial(k));
            for &r in parts {
                let s = stirling2_table().get(r + l + 1, l + 1);
                term *= Rational::new(s, factorial(r) * binomial(r + l + 1, l + 1));
            }
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

/// Bernoulli number of the second kind: coefficient of t^n in t / ln(1 + t).
pub fn bernoulli_second_kind(n: usize) -> Rational {
    cached(2, 0, n, |len| {
        let base: Vec<Rational> = (0..len)
            .map(|k| {
                let c = Rational::new(BigInt::one(), BigInt::from(k + 1));
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        series_inverse(&base)
    })
}

/// Euler number E_n (E_2 = -1, E_4 = 5, odd indices vanish).
pub fn euler_number(n: usize) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    cached(3, 0, n, |len| {
        // sum_{k=0}^{m} C(2m, 2k) E_{2k} = 0 for m >= 1, stored densely by n
        let mut e: Vec<Rational> = vec![Rational::zero(); len];
        e[0] = Rational::one();
        for m in 1..len.div_ceil(2) {
            let s = (0..m).fold(Rational::zero(), |s, k| s + Rational::from(binomial(2 * m, 2 * k)) * &e[2 * k]);
            e[2 * m] = -s;
        }
        e
    })
    .to_integer()
}

/// Formats a rational as `p/q`, or `p` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest f64 to an exact rational, robust to huge numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both to ~64 significant bits before dividing.
    let shift = |x: &BigInt| x.bits().saturating_sub(64) as i32;
    let (sn, sd) = (shift(q.numer()), shift(q.denom()));
    let n = (q.numer() >> sn as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> sd as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi(sn - sd)
}

/// Greatest common divisor helper kept for callers that build rationals by hand.
pub fn is_reduced(q: &Rational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_second(4, 2).unwrap(), BigInt::from(7));
        assert_eq!(stirling_first_signed(3, 1).unwrap(), BigInt::from(2));
        assert_eq!(stirling_first_signed(4, 2).unwrap(), BigInt::from(11));
        assert_eq!(stirling_first_signed(4, 1).unwrap(), BigInt::from(-6));
        for n in 1..12 {
            assert_eq!(stirling_second(n, n).unwrap(), BigInt::one());
            assert_eq!(stirling_second(n, n - 1).unwrap(), binomial(n, 2));
            assert_eq!(stirling_first_signed(n, n).unwrap(), BigInt::one());
        }
        assert!(matches!(stirling_second(2, 3), Err(Error::Domain(_))));
        assert!(matches!(stirling_first_signed(2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn stirling_routes_agree() {
        for n in 0..=10 {
            for k in 0..=n {
                let a = stirling_second(n, k).unwrap();
                assert_eq!(a, stirling_second_binomial(n, k).unwrap(), "({n},{k})");
                assert_eq!(a, stirling_second_compositions(n, k).unwrap(), "({n},{k})");
            }
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_number(0), r(1, 1));
        assert_eq!(bernoulli_number(1), r(-1, 2));
        assert_eq!(bernoulli_number(2), r(1, 6));
        assert_eq!(bernoulli_number(4), r(-1, 30));
        assert_eq!(bernoulli_number(12), r(-691, 2730));
        for n in (3..40).step_by(2) {
            assert!(bernoulli_number(n).is_zero());
        }
    }

    #[test]
    fn higher_order_examples() {
        assert_eq!(bernoulli_higher_order(2, 2).unwrap(), r(5, 6));
        for m in 1..8 {
            assert_eq!(bernoulli_higher_order(m, 0).unwrap(), Rational::one());
            assert_eq!(bernoulli_higher_order(m, 1).unwrap(), r(-(m as i64), 2));
            for k in 0..7 {
                assert_eq!(
                    bernoulli_higher_order(m, k).unwrap(),
                    bernoulli_higher_order_compositions(m - 1, k),
                    "m={m} k={k}"
                );
            }
        }
        assert!(bernoulli_higher_order(0, 3).is_err());
    }

    #[test]
    fn second_kind_examples() {
        assert_eq!(bernoulli_second_kind(0), r(1, 1));
        assert_eq!(bernoulli_second_kind(1), r(1, 2));
        assert_eq!(bernoulli_second_kind(2), r(-1, 12));
        assert_eq!(bernoulli_second_kind(3), r(1, 24));
        assert_eq!(bernoulli_second_kind(4), r(-19, 720));
    }

    #[test]
    fn euler_examples() {
        let e: Vec<i64> = (0..9).map(|n| euler_number(n).to_i64().unwrap()).collect();
        assert_eq!(e, vec![1, 0, -1, 0, 5, 0, -61, 0, 1385]);
    }

    #[test]
    fn rational_formatting_and_conversion() {
        assert_eq!(format_rational(&r(-1, 2)), "-1/2");
        assert_eq!(format_rational(&r(6, 3)), "2");
        assert!(is_reduced(&r(4, 6)));
        assert_eq!(rational_to_f64(&r(1, 3)), 1.0 / 3.0);
        let huge = Rational::new(factorial(200), factorial(199));
        assert!((rational_to_f64(&huge) - 200.0).abs() < 1e-12);
    }
}
