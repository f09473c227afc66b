use std::collections::HashSet;

use finpart::combinatorics::{
    bernoulli_higher_order, bernoulli_number, binomial, compositions, euler_number, format_rational, is_reduced,
    partition_count, partitions, stirling_first_signed, stirling_second, stirling_second_binomial, Rational,
};
use num_bigint::BigInt;
use proptest::prelude::*;

proptest! {
    #[test]
    fn partitions_are_exact_and_distinct(k in 0usize..=24) {
        let ps = partitions(k).unwrap();
        prop_assert_eq!(ps.len(), partition_count(k).unwrap());
        let mut seen = HashSet::new();
        let mut arrangements = BigInt::from(0);
        for p in ps.iter() {
            let weight: usize = p.nonzero().map(|(r, m)| r * m).sum();
            prop_assert_eq!(weight, k);
            prop_assert!(seen.insert(p.nonzero().collect::<Vec<_>>()));
            arrangements += p.arrangements();
        }
        // ordered arrangements of all partitions of k are the compositions of k
        let want = if k == 0 { BigInt::from(1) } else { BigInt::from(1) << (k - 1) };
        prop_assert_eq!(arrangements, want);
    }

    #[test]
    fn compositions_grouped_by_length(k in 1usize..=12) {
        for (i, group) in compositions(k).iter().enumerate() {
            let t = i + 1;
            prop_assert_eq!(BigInt::from(group.len()), binomial(k - 1, t - 1));
            for c in group {
                prop_assert_eq!(c.len(), t);
                prop_assert_eq!(c.iter().sum::<usize>(), k);
                prop_assert!(c.iter().all(|&r| r >= 1));
            }
        }
    }

    #[test]
    fn stirling_recurrences(n in 1usize..=18, k in 1usize..=18) {
        prop_assume!(k <= n);
        // S(n,k) = k S(n-1,k) + S(n-1,k-1)
        let lhs = stirling_second(n, k).unwrap();
        let prev = if k <= n - 1 { stirling_second(n - 1, k).unwrap() } else { BigInt::from(0) };
        prop_assert_eq!(&lhs, &(BigInt::from(k) * prev + stirling_second(n - 1, k - 1).unwrap()));
        prop_assert_eq!(lhs, stirling_second_binomial(n, k).unwrap());
        // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k)
        let prev = if k <= n - 1 { stirling_first_signed(n - 1, k).unwrap() } else { BigInt::from(0) };
        prop_assert_eq!(
            stirling_first_signed(n, k).unwrap(),
            stirling_first_signed(n - 1, k - 1).unwrap() - BigInt::from(n - 1) * prev
        );
    }

    #[test]
    fn bernoulli_values_are_reduced(n in 0usize..=40) {
        let b = bernoulli_number(n);
        prop_assert!(is_reduced(&b));
        if n % 2 == 1 && n > 1 {
            prop_assert_eq!(b.clone(), Rational::from(BigInt::from(0)));
        }
        prop_assert_eq!(bernoulli_higher_order(1, n).unwrap(), b);
    }
}

#[test]
fn bell_numbers_from_row_sums() {
    let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    for (n, &b) in bell.iter().enumerate() {
        let s: BigInt = (0..=n).map(|k| stirling_second(n, k).unwrap()).sum();
        assert_eq!(s, BigInt::from(b), "n={n}");
    }
}

#[test]
fn known_values() {
    assert_eq!(format_rational(&bernoulli_number(2)), "1/6");
    assert_eq!(format_rational(&bernoulli_number(1)), "-1/2");
    assert_eq!(format_rational(&bernoulli_number(12)), "-691/2730");
    let euler: Vec<i64> = (0..=8).map(|n| euler_number(n).try_into().unwrap()).collect();
    assert_eq!(euler, vec![1, 0, -1, 0, 5, 0, -61, 0, 1385]);
    assert_eq!(partition_count(10).unwrap(), 42);
    assert_eq!(partition_count(0).unwrap(), 1);
    assert_eq!(stirling_second(10, 5).unwrap(), BigInt::from(42525));
    assert_eq!(stirling_first_signed(6, 3).unwrap(), BigInt::from(-225));
}
