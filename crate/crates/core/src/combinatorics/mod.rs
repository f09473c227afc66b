//! Integer partitions and exact number families.

pub mod identities;
mod numbers;
mod partitions;

pub use numbers::{
    bernoulli_higher_order, bernoulli_higher_order_compositions, bernoulli_number, bernoulli_second_kind, binomial,
    euler_number, factorial, format_rational, is_reduced, rational_to_f64, stirling_first_signed, stirling_second,
    stirling_second_binomial, stirling_second_compositions, Rational,
};
pub use partitions::{compositions, partition_count, partitions, PartitionMultiset, MAX_PARTITION_ORDER};

/// `B_n` as an f64; memoized through the exact table.
pub fn bernoulli_f64(n: usize) -> f64 {
    rational_to_f64(&bernoulli_number(n))
}

/// Binomial coefficient as an f64 (exact for the small arguments used in formulas).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    num_traits::ToPrimitive::to_f64(&binomial(n, k)).unwrap_or(f64::INFINITY)
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}
