//! The blocking construction: the first n'k indices split into k long
//! blocks of length n' - m, each followed by a separator of length m, plus
//! a differently-anchored (k+1)-th pair. The (k+1)-th long block reuses
//! indices of the k-th pair (that overlap is part of the construction and
//! is flagged in the layout), and its separator runs past n'k.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::BoundsError;

/// Inclusive 1-based index intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockingLayout {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub n_prime: u64,
    /// Long blocks I_1 ..= I_{k+1} as (first, last).
    pub blocks: Vec<(u64, u64)>,
    /// Separators I*_1 ..= I*_{k+1} as (first, last).
    pub separators: Vec<(u64, u64)>,
    /// The (k+1)-th long block intersects the k-th pair.
    pub tail_overlaps_previous: bool,
}

impl BlockingLayout {
    /// Largest index any block or separator touches (= k n' + m).
    pub fn max_index(&self) -> u64 {
        self.k * self.n_prime + self.m
    }
}

/// Builds the layout for k blocks with separator length m, k < m < n/k.
pub fn blocking_layout(n: u64, k: u64, m: u64) -> Result<BlockingLayout, BoundsError> {
    if k < 1 {
        return Err(BoundsError::BadLayout("k must be >= 1".into()));
    }
    if n < k {
        return Err(BoundsError::BadLayout(format!("n = {n} is below k = {k}")));
    }
    let n_prime = n / k;
    if m <= k {
        return Err(BoundsError::BadLayout(format!(
            "m must exceed k: m = {m}, k = {k}"
        )));
    }
    if m >= n_prime {
        return Err(BoundsError::BadLayout(format!(
            "m must stay below n' = floor(n/k) = {n_prime}, got m = {m}"
        )));
    }
    let mut blocks = Vec::with_capacity(k as usize + 1);
    let mut separators = Vec::with_capacity(k as usize + 1);
    for j in 1..=k {
        let start = (j - 1) * n_prime + 1;
        blocks.push((start, j * n_prime - m));
        separators.push((j * n_prime - m + 1, j * n_prime));
    }
    let tail_block = ((k - 1) * n_prime + m + 1, k * n_prime);
    let tail_sep = (k * n_prime + 1, k * n_prime + m);
    let tail_overlaps_previous =
        tail_block.0 <= blocks[k as usize - 1].1.max(separators[k as usize - 1].1);
    blocks.push(tail_block);
    separators.push(tail_sep);
    Ok(BlockingLayout {
        n,
        k,
        m,
        n_prime,
        blocks,
        separators,
        tail_overlaps_previous,
    })
}
