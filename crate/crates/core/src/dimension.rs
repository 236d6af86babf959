//! Invariant dimensions and the generator ledger.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Number of partitions of `w` into at most `parts` parts, each at most `max`.
pub fn partition_count(max: u32, parts: u32, w: i64) -> u128 {
    if w < 0 {
        return 0;
    }
    let w = w as usize;
    // dp[k][s]: partitions of s into exactly k parts using the sizes seen so far.
    let mut dp = vec![vec![0u128; w + 1]; parts as usize + 1];
    dp[0][0] = 1;
    for size in 1..=max as usize {
        for k in 1..=parts as usize {
            for s in size..=w {
                dp[k][s] += dp[k - 1][s - size];
            }
        }
    }
    dp.iter().map(|row| row[w]).sum()
}

/// Dimension of the degree-`i` invariants of the binary form of degree `d`.
pub fn dim_invariants(d: u32, i: u32) -> u64 {
    if (d * i) % 2 == 1 {
        return 0;
    }
    let w = (d * i / 2) as i64;
    (partition_count(d, i, w) - partition_count(d, i, w - 1)) as u64
}

/// Dimension of the semi-invariants of degree `i` and weight `w`.
pub fn dim_semi_invariants(d: u32, i: u32, w: i64) -> u64 {
    if 2 * w > (d * i) as i64 {
        return 0;
    }
    (partition_count(d, i, w) - partition_count(d, i, w - 1)) as u64
}

/// Coefficient of `x^i` in `prod_k (1 - x^k)^(-delta_k)`.
pub fn sigma_series(deltas: &BTreeMap<u32, u64>, i: u32) -> u128 {
    let n = i as usize;
    let mut series = vec![0u128; n + 1];
    series[0] = 1;
    for (&k, &mult) in deltas.range(1..i.max(1)) {
        let k = k as usize;
        for _ in 0..mult {
            for s in k..=n {
                series[s] += series[s - k];
            }
        }
    }
    series[n]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub dim: u64,
    pub sigma: u64,
    pub syzygies: u64,
    pub delta: u64,
}

/// Per-degree record of `dim I_i`, `sigma_i`, `dim S_i` and `delta_i`.
#[derive(Clone, Debug, Default)]
pub struct DeltaLedger {
    d: u32,
    rows: BTreeMap<u32, LedgerRow>,
}

impl DeltaLedger {
    pub fn new(d: u32) -> Self {
        DeltaLedger { d, rows: BTreeMap::new() }
    }

    /// A ledger seeded with known deltas (no dims or syzygies recorded).
    pub fn from_deltas(d: u32, deltas: &[(u32, u64)]) -> Self {
        let mut ledger = Self::new(d);
        for &(i, delta) in deltas {
            ledger.rows.insert(i, LedgerRow { dim: 0, sigma: 0, syzygies: 0, delta });
        }
        ledger
    }

    pub fn form_degree(&self) -> u32 {
        self.d
    }

    pub fn deltas(&self) -> BTreeMap<u32, u64> {
        self.rows.iter().map(|(&i, r)| (i, r.delta)).collect()
    }

    pub fn row(&self, i: u32) -> Option<&LedgerRow> {
        self.rows.get(&i)
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &LedgerRow)> {
        self.rows.iter().map(|(&i, r)| (i, r))
    }

    pub fn total(&self) -> u64 {
        self.rows.values().map(|r| r.delta).sum()
    }
}

/// Number of degree-`i` products of the generators recorded below `i`.
pub fn sigma_count(ledger: &DeltaLedger, i: u32) -> u64 {
    sigma_series(&ledger.deltas(), i) as u64
}

/// Records degree `i` with syzygy dimension `syz` and returns `delta_i`.
pub fn delta_account(ledger: &mut DeltaLedger, i: u32, syz: u64) -> Result<u64> {
    let dim = dim_invariants(ledger.d, i);
    let sigma = sigma_count(ledger, i);
    let delta = dim as i64 - sigma as i64 + syz as i64;
    if delta < 0 || syz > sigma {
        return Err(Error::NegativeDelta { degree: i, delta, dim, sigma, syz });
    }
    let delta = delta as u64;
    ledger.rows.insert(i, LedgerRow { dim, sigma, syzygies: syz, delta });
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_dimensions() {
        assert_eq!(dim_invariants(7, 14), 4);
        assert_eq!(dim_invariants(7, 3), 0);
        assert_eq!(dim_invariants(7, 4), 1);
        assert_eq!(dim_invariants(2, 2), 1);
    }

    #[test]
    fn sigma_from_small_ledger() {
        let l = DeltaLedger::from_deltas(7, &[(4, 1), (8, 3), (12, 6), (14, 4)]);
        assert_eq!(sigma_count(&l, 16), 16);
        assert_eq!(sigma_count(&l, 14), 0);
    }

    #[test]
    fn negative_delta_aborts() {
        let mut l = DeltaLedger::from_deltas(7, &[(4, 5)]);
        assert!(matches!(delta_account(&mut l, 8, 0), Err(Error::NegativeDelta { .. })));
    }
}
