//! Exact checks of the Stirling/Bernoulli identities behind the integer-case
//! finite-part formula. Each function returns both sides so callers can
//! report mismatches.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::numbers::{
    bernoulli_higher_order, bernoulli_number, bernoulli_second_kind, factorial, stirling_first_signed, stirling_second,
    stirling_second_binomial, stirling_second_compositions, Rational,
};

/// Two sides of an exact identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Sides {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Sides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn int(x: BigInt) -> Rational {
    Rational::from(x)
}

fn pow_over_factorial(base: usize, e: usize) -> Rational {
    Rational::new(BigInt::from(base).pow(e as u32), factorial(e))
}

/// `sum_{k=0}^{len-1} B_k^{(order)}/k! * base^{top-k}/(top-k)!`.
fn bernoulli_convolution(order: usize, len: usize, base: usize, top: usize) -> Rational {
    (0..len).fold(Rational::zero(), |s, k| {
        let b = bernoulli_higher_order(order, k).expect("order >= 1");
        s + b / int(factorial(k)) * pow_over_factorial(base, top - k)
    })
}

/// For `n >= 1`, `q >= 0`:
/// `sum_{l=1}^{n} (-1)^{l-1} (q+l)! [sum_{k<l} B_k^{(q+l+1)}/k! (q+l)^{l-k-1}/(l-k-1)!] S(q+n, q+l)`
/// equals `(q+1)!` when `n = 1` and vanishes otherwise.
pub fn stirling_bernoulli_delta(n: usize, q: usize) -> Sides {
    let mut lhs = Rational::zero();
    for l in 1..=n {
        let inner = bernoulli_convolution(q + l + 1, l, q + l, l - 1);
        let term = int(factorial(q + l)) * inner * int(stirling_second(q + n, q + l).expect("q+l <= q+n"));
        if l % 2 == 1 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = if n == 1 { int(factorial(q + 1)) } else { Rational::zero() };
    Sides { lhs, rhs }
}

/// `b_{l+1} = (-1)^{l+1} sum_{k=0}^{l+1} B_k^{(l+1)}/k! l^{l+1-k}/(l+1-k)!` for `l >= 1`.
pub fn second_kind_closed_form(l: usize) -> Sides {
    let mut rhs = bernoulli_convolution(l + 1, l + 2, l, l + 1);
    if (l + 1) % 2 == 1 {
        rhs = -rhs;
    }
    Sides { lhs: bernoulli_second_kind(l + 1), rhs }
}

/// `B_{m+1}/(m+1) = sum_{l=1}^{m} (-1)^l l! S(m,l) sum_{k=0}^{l+1} B_k^{(l+1)}/k! l^{l+1-k}/(l+1-k)!`.
pub fn bernoulli_stirling_sum(m: usize) -> Sides {
    let mut rhs = Rational::zero();
    for l in 1..=m {
        let term = int(factorial(l))
            * int(stirling_second(m, l).expect("l <= m"))
            * bernoulli_convolution(l + 1, l + 2, l, l + 1);
        if l % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    let lhs = bernoulli_number(m + 1) / int(BigInt::from(m + 1));
    Sides { lhs, rhs }
}

/// `sum_{l=j}^{k} s(l, j) S(k, l) = delta_{jk}`.
pub fn stirling_orthogonality(j: usize, k: usize) -> Sides {
    let lhs = (j..=k).fold(BigInt::zero(), |s, l| {
        s + stirling_first_signed(l, j).expect("j <= l") * stirling_second(k, l).expect("l <= k")
    });
    let rhs = if j == k { BigInt::one() } else { BigInt::zero() };
    Sides { lhs: int(lhs), rhs: int(rhs) }
}

/// Composition-sum and alternating-binomial forms of S(n, k) against each other.
pub fn stirling_second_forms(n: usize, k: usize) -> Sides {
    Sides {
        lhs: int(stirling_second_compositions(n, k).expect("k <= n")),
        rhs: int(stirling_second_binomial(n, k).expect("k <= n")),
    }
}

/// `sum_{l=1}^{m} (-1)^l (l-1)! S(m, l) = 0` for `m >= 2`.
pub fn stirling_alternating_sum(m: usize) -> Sides {
    let lhs = (1..=m).fold(BigInt::zero(), |s, l| {
        let t = factorial(l - 1) * stirling_second(m, l).expect("l <= m");
        if l % 2 == 0 {
            s + t
        } else {
            s - t
        }
    });
    Sides { lhs: int(lhs), rhs: Rational::zero() }
}
