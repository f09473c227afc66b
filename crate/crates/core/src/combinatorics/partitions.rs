use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// Integer partition of `k` stored as multiplicities: `mults[r - 1]` is the
/// number of parts equal to `r`.
///
/// Invariant: `sum_r r * mults[r - 1] == k` and `mults.len() == k`. The
/// empty partition of 0 has no multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionMultiset {
    pub k: usize,
    pub mults: Vec<usize>,
}

impl PartitionMultiset {
    /// Total number of parts `J`.
    pub fn parts(&self) -> usize {
        self.mults.iter().sum()
    }

    pub fn multiplicity(&self, r: usize) -> usize {
        self.mults.get(r.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Iterates over `(r, m_r)` with `m_r > 0`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mults.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (i + 1, m))
    }

    /// Number of distinct orderings of the parts, `J! / prod m_r!`.
    pub fn arrangements(&self) -> BigInt {
        let mut num = factorial_big(self.parts());
        for &m in &self.mults {
            num /= factorial_big(m);
        }
        num
    }
}

pub(crate) fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

type PartitionCache = RwLock<HashMap<usize, Arc<Vec<PartitionMultiset>>>>;

fn cache() -> &'static PartitionCache {
    static CACHE: OnceLock<PartitionCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Hard limit on `k`; p(60) is close to a million partitions.
pub const MAX_PARTITION_ORDER: usize = 60;

/// All partitions of `k`, in ascending lexicographic order of the
/// multiplicity vector `(m_1, ..., m_k)`. Results are memoized.
pub fn partitions(k: usize) -> Result<Arc<Vec<PartitionMultiset>>> {
    if k > MAX_PARTITION_ORDER {
        return Err(Error::Range(format!("partition order {k} exceeds the supported maximum {MAX_PARTITION_ORDER}")));
    }
    if let Some(p) = cache().read().expect("partition cache poisoned").get(&k) {
        return Ok(p.clone());
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(PartitionMultiset { k: 0, mults: Vec::new() });
    } else {
        let mut mults = vec![0usize; k];
        generate(k, 1, k, &mut mults, &mut out);
    }
    let out = Arc::new(out);
    cache().write().expect("partition cache poisoned").insert(k, out.clone());
    Ok(out)
}

fn generate(k: usize, r: usize, remaining: usize, mults: &mut [usize], out: &mut Vec<PartitionMultiset>) {
    if r == k {
        if remaining % k == 0 {
            mults[k - 1] = remaining / k;
            out.push(PartitionMultiset { k, mults: mults.to_vec() });
            mults[k - 1] = 0;
        }
        return;
    }
    for m in 0..=remaining / r {
        let rest = remaining - m * r;
        // Parts larger than r can represent `rest` iff it is 0 or exceeds r.
        if rest != 0 && rest <= r {
            continue;
        }
        mults[r - 1] = m;
        generate(k, r + 1, rest, mults, out);
    }
    mults[r - 1] = 0;
}

/// Number of partitions p(k).
pub fn partition_count(k: usize) -> Result<usize> {
    Ok(partitions(k)?.len())
}

/// All compositions of `k` (ordered tuples of positive integers summing to
/// `k`), grouped by length. Element `t - 1` holds compositions with `t` parts.
pub fn compositions(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut by_len: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    if k == 0 {
        return by_len;
    }
    // Bitmask over the k-1 cut positions.
    for mask in 0u64..(1u64 << (k - 1)) {
        let mut parts = Vec::with_capacity(mask.count_ones() as usize + 1);
        let mut last = 0;
        for i in 0..k - 1 {
            if mask >> i & 1 == 1 {
                parts.push(i + 1 - last);
                last = i + 1;
            }
        }
        parts.push(k - last);
        by_len[parts.len() - 1].push(parts);
    }
    by_len
}
