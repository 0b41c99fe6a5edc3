//! Subsets of a small ground set `[n] = {1, ..., n}` packed into a `u64`.
//!
//! Element `i` lives at bit `i - 1`. Every vertex of a Johnson graph, every
//! basis and every non-basis in this crate is one of these masks.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

/// Largest ground set a [`SubsetMask`] can describe.
pub const MAX_GROUND: usize = 64;

/// An arbitrary subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetMask {
    bits: u64,
    n: u8,
}

/// All bits below `n` set.
#[inline]
pub const fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl SubsetMask {
    /// Wraps raw bits. Panics if a bit at position `>= n` is set.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(
            n <= MAX_GROUND,
            "ground set of size {n} exceeds {MAX_GROUND}"
        );
        assert_eq!(
            bits & !full_mask(n),
            0,
            "mask {bits:#x} has bits outside [{n}]"
        );
        Self { bits, n: n as u8 }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_bits(n, 0)
    }

    pub fn full(n: usize) -> Self {
        Self::from_bits(n, full_mask(n))
    }

    /// Builds a subset from 1-based elements. Returns `None` if an element is
    /// outside `[n]` or repeated.
    pub fn from_elements<I>(n: usize, elements: I) -> Option<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        if n > MAX_GROUND {
            return None;
        }
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return None;
            }
            let b = 1u64 << (e - 1);
            if bits & b != 0 {
                return None;
            }
            bits |= b;
        }
        Some(Self { bits, n: n as u8 })
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn ground(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.ground() && self.bits >> (element - 1) & 1 == 1
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        BitIter(self.bits).map(|i| i + 1)
    }

    pub fn complement(self) -> Self {
        Self {
            bits: !self.bits & full_mask(self.ground()),
            n: self.n,
        }
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits ^ other.bits,
            n: self.n,
        }
    }

    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits | other.bits,
            n: self.n,
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits & other.bits,
            n: self.n,
        }
    }

    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            bits: self.bits & !other.bits,
            n: self.n,
        }
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn with(self, element: usize) -> Self {
        debug_assert!(element >= 1 && element <= self.ground());
        Self {
            bits: self.bits | 1 << (element - 1),
            n: self.n,
        }
    }

    pub fn without(self, element: usize) -> Self {
        debug_assert!(element >= 1 && element <= self.ground());
        Self {
            bits: self.bits & !(1 << (element - 1)),
            n: self.n,
        }
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements().join(","))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Iterates the positions of set bits, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

/// Scatters the low bits of `src` into the set positions of `mask`, lowest
/// first.
pub fn deposit_bits(src: u64, mask: u64) -> u64 {
    BitIter(mask)
        .enumerate()
        .filter(|(k, _)| src >> k & 1 == 1)
        .fold(0, |acc, (_, pos)| acc | 1 << pos)
}

/// Gathers the bits of `src` at the set positions of `mask` into the low
/// bits; inverse of [`deposit_bits`] on masks inside `mask`.
pub fn extract_bits(src: u64, mask: u64) -> u64 {
    BitIter(mask)
        .enumerate()
        .filter(|(_, pos)| src >> pos & 1 == 1)
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

/// All `k`-subsets of `[n]` as raw masks, in increasing numeric order.
///
/// Out-of-range `k` yields nothing.
pub fn k_subsets(n: usize, k: isize) -> Vec<u64> {
    if k < 0 || k as usize > n || n > MAX_GROUND {
        return Vec::new();
    }
    let k = k as usize;
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    // Gosper's hack walks same-popcount masks in increasing order.
    let mut x: u64 = full_mask(k);
    let limit = full_mask(n);
    loop {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 || r > limit {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
        if x > limit {
            break;
        }
    }
    out
}
