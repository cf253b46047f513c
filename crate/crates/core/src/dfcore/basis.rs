//! Multi-index bookkeeping for the exterior powers of an `n`-dimensional
//! frame.
//!
//! A multi-index is stored as a bit mask over the frame axes. The basis of
//! Λᵖ is ordered colexicographically, which for masks is simply ascending
//! integer order, so the rank of a mask is its combinadic.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported frame dimension.
pub const MAX_DIM: usize = 16;

const BINOM: [[usize; MAX_DIM + 1]; MAX_DIM + 1] = {
    let mut t = [[0usize; MAX_DIM + 1]; MAX_DIM + 1];
    let mut n = 0;
    while n <= MAX_DIM {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
};

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        BINOM[n][k]
    }
}

/// Strictly increasing tuple of axis indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds a multi-index from strictly increasing axes below `n`.
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::UnsupportedDimension {
                n,
                reason: "frame dimension exceeds MAX_DIM",
            });
        }
        let mut mask = 0u32;
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= n {
                return Err(Error::Degree(format!("axis {i} out of range for n = {n}")));
            }
            if prev.is_some_and(|p| p >= i) {
                return Err(Error::Degree(format!(
                    "multi-index {indices:?} is not strictly increasing"
                )));
            }
            prev = Some(i);
            mask |= 1 << i;
        }
        Ok(MultiIndex(mask))
    }

    #[inline]
    pub fn from_mask(mask: u32) -> Self {
        MultiIndex(mask)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    #[inline]
    pub fn contains(self, axis: usize) -> bool {
        self.0 >> axis & 1 == 1
    }

    /// Complement inside an `n`-frame.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        MultiIndex(full_mask(n) & !self.0)
    }

    /// Position in the colexicographic basis of Λᵈ, `d = degree()`.
    #[inline]
    pub fn rank(self) -> usize {
        rank(self.0)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
pub(crate) fn rank(mut mask: u32) -> usize {
    let mut r = 0;
    let mut i = 1;
    while mask != 0 {
        let c = mask.trailing_zeros() as usize;
        r += binomial(c, i);
        i += 1;
        mask &= mask - 1;
    }
    r
}

/// Parity of the shuffle that sorts the concatenation `(a, b)` of two
/// disjoint increasing index lists: `true` means odd.
#[inline]
pub(crate) fn merge_parity(a: u32, b: u32) -> bool {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut m = b;
    while m != 0 {
        let k = m.trailing_zeros();
        // elements of `a` strictly above k
        let above = if k >= 31 { 0 } else { a >> (k + 1) };
        inversions += above.count_ones();
        m &= m - 1;
    }
    inversions & 1 == 1
}

/// Parity of moving `axis` to the front of the increasing list `mask`.
#[inline]
pub(crate) fn insert_parity(axis: usize, mask: u32) -> bool {
    (mask & ((1u32 << axis) - 1)).count_ones() & 1 == 1
}

/// All masks of popcount `k` inside an `n`-frame, in rank order.
pub fn combinations(n: usize, k: usize) -> &'static [u32] {
    static TABLE: OnceLock<Vec<Vec<Vec<u32>>>> = OnceLock::new();
    assert!(n <= MAX_DIM, "frame dimension {n} exceeds MAX_DIM");
    let table = TABLE.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|n| {
                let mut by_k = vec![Vec::new(); n + 1];
                for mask in 0..(1u32 << n) {
                    by_k[mask.count_ones() as usize].push(mask);
                }
                by_k
            })
            .collect()
    });
    if k > n {
        &[]
    } else {
        &table[n][k]
    }
}

/// Sign and mask of the sorted index tuple, or `None` if an axis repeats.
pub(crate) fn sort_indices(indices: &[usize]) -> Option<(bool, u32)> {
    let mut mask = 0u32;
    let mut odd = false;
    for &i in indices {
        let bit = 1u32 << i;
        if mask & bit != 0 {
            return None;
        }
        // each already-placed larger index is an inversion
        odd ^= (mask >> i).count_ones() & 1 == 1;
        mask |= bit;
    }
    Some((odd, mask))
}
