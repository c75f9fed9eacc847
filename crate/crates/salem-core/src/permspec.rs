//! Computable bijections of the positive integers used as digit-index
//! sequences, with the queries the continuity and monotonicity
//! classifications need.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A bijection `k -> n_k` of the positive integers from one of three
/// finitely describable families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSequence {
    /// `n_k = k`.
    Identity,
    /// A permutation of `1..=N` applied to the first `N` indices, identity
    /// beyond.
    FinitePermutation(Vec<u32>),
    /// A permutation of `1..=B` applied within each consecutive block of
    /// length `B`.
    BlockPermutation { block_len: u32, map: Vec<u32> },
}

/// How far the sequence deviates from the identity; this drives the
/// discontinuity-set and monotonicity classifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationClass {
    IdentityEverywhere,
    FiniteDeviation,
    InfiniteDeviation,
}

fn check_permutation(table: &[u32]) -> Result<()> {
    let n = table.len();
    let mut seen = alloc::vec![false; n];
    for &t in table {
        if t < 1 || t as usize > n || seen[(t - 1) as usize] {
            return Err(Error::NotAPermutation);
        }
        seen[(t - 1) as usize] = true;
    }
    Ok(())
}

impl IndexSequence {
    pub fn identity() -> Self {
        IndexSequence::Identity
    }

    pub fn finite_permutation(table: Vec<u32>) -> Result<Self> {
        check_permutation(&table)?;
        Ok(IndexSequence::FinitePermutation(table))
    }

    pub fn block_permutation(map: Vec<u32>) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_permutation(&map)?;
        Ok(IndexSequence::BlockPermutation {
            block_len: map.len() as u32,
            map,
        })
    }

    /// `n_k`.
    pub fn position(&self, k: u32) -> u32 {
        debug_assert!(k >= 1);
        match self {
            IndexSequence::Identity => k,
            IndexSequence::FinitePermutation(table) => {
                if (k as usize) <= table.len() {
                    table[(k - 1) as usize]
                } else {
                    k
                }
            }
            IndexSequence::BlockPermutation { block_len, map } => {
                let b = (k - 1) / block_len;
                let r = (k - 1) % block_len;
                b * block_len + map[r as usize]
            }
        }
    }

    /// The unique `k` with `position(k) = n`.
    pub fn preimage(&self, n: u32) -> u32 {
        debug_assert!(n >= 1);
        match self {
            IndexSequence::Identity => n,
            IndexSequence::FinitePermutation(table) => {
                if (n as usize) <= table.len() {
                    for (i, &t) in table.iter().enumerate() {
                        if t == n {
                            return i as u32 + 1;
                        }
                    }
                    unreachable!("validated permutation covers 1..=N");
                } else {
                    n
                }
            }
            IndexSequence::BlockPermutation { block_len, map } => {
                let b = (n - 1) / block_len;
                let r = (n - 1) % block_len + 1;
                for (i, &t) in map.iter().enumerate() {
                    if t == r {
                        return b * block_len + i as u32 + 1;
                    }
                }
                unreachable!("validated permutation covers 1..=B");
            }
        }
    }

    /// `max { k : position(k) <= m }`, i.e. the last index that feeds any of
    /// the first `m` digit positions.
    pub fn k0(&self, m: u32) -> u32 {
        debug_assert!(m >= 1);
        (1..=m).map(|n| self.preimage(n)).max().unwrap()
    }

    pub fn deviation_class(&self) -> DeviationClass {
        match self {
            IndexSequence::Identity => DeviationClass::IdentityEverywhere,
            IndexSequence::FinitePermutation(table) => {
                let is_id = table
                    .iter()
                    .enumerate()
                    .all(|(i, &t)| t == i as u32 + 1);
                if is_id {
                    DeviationClass::IdentityEverywhere
                } else {
                    DeviationClass::FiniteDeviation
                }
            }
            IndexSequence::BlockPermutation { map, .. } => {
                let is_id = map.iter().enumerate().all(|(i, &t)| t == i as u32 + 1);
                if is_id {
                    DeviationClass::IdentityEverywhere
                } else {
                    DeviationClass::InfiniteDeviation
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_non_permutations() {
        assert!(IndexSequence::finite_permutation(vec![1, 1]).is_err());
        assert!(IndexSequence::finite_permutation(vec![2, 3]).is_err());
        assert!(IndexSequence::block_permutation(vec![]).is_err());
    }

    #[test]
    fn position_examples() {
        assert_eq!(IndexSequence::identity().position(7), 7);
        let swap = IndexSequence::finite_permutation(vec![2, 1]).unwrap();
        assert_eq!(swap.position(1), 2);
        assert_eq!(swap.position(3), 3);
        let block = IndexSequence::block_permutation(vec![2, 1]).unwrap();
        assert_eq!(block.position(5), 6);
        assert_eq!(block.position(6), 5);
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(IndexSequence::identity().preimage(5), 5);
        let swap = IndexSequence::finite_permutation(vec![2, 1]).unwrap();
        assert_eq!(swap.preimage(1), 2);
        let block = IndexSequence::block_permutation(vec![2, 1]).unwrap();
        assert_eq!(block.preimage(6), 5);
    }

    #[test]
    fn k0_examples() {
        assert_eq!(IndexSequence::identity().k0(4), 4);
        let swap = IndexSequence::finite_permutation(vec![2, 1]).unwrap();
        assert_eq!(swap.k0(1), 2);
        let block = IndexSequence::block_permutation(vec![2, 1]).unwrap();
        assert_eq!(block.k0(3), 4);
    }

    #[test]
    fn deviation_classes() {
        assert_eq!(
            IndexSequence::identity().deviation_class(),
            DeviationClass::IdentityEverywhere
        );
        let p = IndexSequence::finite_permutation(vec![3, 1, 2]).unwrap();
        assert_eq!(p.deviation_class(), DeviationClass::FiniteDeviation);
        let id_table = IndexSequence::finite_permutation(vec![1, 2, 3]).unwrap();
        assert_eq!(
            id_table.deviation_class(),
            DeviationClass::IdentityEverywhere
        );
        let b = IndexSequence::block_permutation(vec![2, 1]).unwrap();
        assert_eq!(b.deviation_class(), DeviationClass::InfiniteDeviation);
        let id_block = IndexSequence::block_permutation(vec![1, 2]).unwrap();
        assert_eq!(
            id_block.deviation_class(),
            DeviationClass::IdentityEverywhere
        );
    }

    #[test]
    fn bijectivity_over_a_long_range() {
        let seqs = [
            IndexSequence::identity(),
            IndexSequence::finite_permutation(vec![4, 2, 3, 1, 5]).unwrap(),
            IndexSequence::block_permutation(vec![3, 1, 2]).unwrap(),
        ];
        for seq in &seqs {
            for k in 1..=10_000u32 {
                assert_eq!(seq.preimage(seq.position(k)), k);
                assert_eq!(seq.position(seq.preimage(k)), k);
            }
        }
    }
}
