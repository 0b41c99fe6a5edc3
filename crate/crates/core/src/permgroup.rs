//! Permutations of `[n]` and their action on subsets.
//!
//! Text form is disjoint cycle notation with 1-based elements, e.g.
//! `(1 2)(3 4 5)`; the identity is `()`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::subset::{k_subsets, BitIter, SubsetMask, MAX_GROUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutations act on different ground sets ({0} vs {1})")]
    Mismatch(usize, usize),
    #[error("image list is not a bijection of [{0}]")]
    NotBijection(usize),
    #[error("ground set of size {0} is larger than {MAX_GROUND}")]
    TooLarge(usize),
    #[error("malformed cycle notation: {0}")]
    Parse(String),
    #[error("element {element} is outside [{n}]")]
    OutOfRange { element: usize, n: usize },
    #[error("element {0} appears in more than one cycle")]
    NotDisjoint(usize),
    #[error("cycles of length 1 are not allowed: ({0})")]
    FixedPointCycle(usize),
}

/// A bijection of `[n]`. Stored 0-based: `image[i] = π(i + 1) - 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u8>,
}

/// Which of the three classes a permutation's support falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportClass {
    Identity,
    Transposition,
    SupportAtLeast3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    /// Nontrivial cycles, 1-based, each starting at its minimum; sorted by that minimum.
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// Number of moved elements.
    pub fn moved(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Support of cycle `j` as a raw mask.
    pub fn cycle_mask(&self, j: usize) -> u64 {
        self.cycles[j].iter().fold(0, |m, &e| m | 1 << (e - 1))
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        Self {
            image: (0..n as u8).collect(),
        }
    }

    /// From 1-based images: `images[i]` is `π(i + 1)`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n > MAX_GROUND {
            return Err(PermError::TooLarge(n));
        }
        let mut seen = 0u64;
        let mut image = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen >> (v - 1) & 1 == 1 {
                return Err(PermError::NotBijection(n));
            }
            seen |= 1 << (v - 1);
            image.push((v - 1) as u8);
        }
        Ok(Self { image })
    }

    /// From disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if n > MAX_GROUND {
            return Err(PermError::TooLarge(n));
        }
        let mut image: Vec<u8> = (0..n as u8).collect();
        let mut used = 0u64;
        for cycle in cycles {
            if cycle.len() == 1 {
                return Err(PermError::FixedPointCycle(cycle[0]));
            }
            for &e in cycle {
                if e == 0 || e > n {
                    return Err(PermError::OutOfRange { element: e, n });
                }
                if used >> (e - 1) & 1 == 1 {
                    return Err(PermError::NotDisjoint(e));
                }
                used |= 1 << (e - 1);
            }
            for (a, b) in cycle.iter().circular_tuple_windows() {
                image[a - 1] = (b - 1) as u8;
            }
        }
        Ok(Self { image })
    }

    /// The transposition exchanging 1-based `e` and `f`.
    pub fn transposition(n: usize, e: usize, f: usize) -> Result<Self, PermError> {
        Self::from_cycles(n, &[vec![e, f]])
    }

    /// Parses cycle notation over `[n]`.
    pub fn parse(n: usize, text: &str) -> Result<Self, PermError> {
        let compact: String = text
            .chars()
            .map(|c| if c.is_whitespace() { ' ' } else { c })
            .collect();
        let mut cycles = Vec::new();
        let mut rest = compact.trim();
        while !rest.is_empty() {
            let Some(after_open) = rest.strip_prefix('(') else {
                return Err(PermError::Parse(text.to_string()));
            };
            let Some(close) = after_open.find(')') else {
                return Err(PermError::Parse(text.to_string()));
            };
            let body = &after_open[..close];
            let elems = body
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| PermError::Parse(text.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !elems.is_empty() {
                cycles.push(elems);
            } else if !(cycles.is_empty() && after_open[close + 1..].trim().is_empty()) {
                // "()" is only accepted on its own, as the identity
                return Err(PermError::Parse(text.to_string()));
            }
            rest = after_open[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `π(e)` for 1-based `e`.
    #[inline]
    pub fn apply(&self, e: usize) -> usize {
        self.image[e - 1] as usize + 1
    }

    /// 0-based image table.
    #[inline]
    pub fn images0(&self) -> &[u8] {
        &self.image
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        if self.n() != other.n() {
            return Err(PermError::Mismatch(self.n(), other.n()));
        }
        Ok(Self {
            image: other
                .image
                .iter()
                .map(|&i| self.image[i as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Self { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn support(&self) -> SubsetMask {
        let bits = self
            .image
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i != v as usize)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        SubsetMask::from_bits(self.n(), bits)
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let mut seen = 0u64;
        let mut cycles = Vec::new();
        for start in 0..self.n() {
            if seen >> start & 1 == 1 || self.image[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while seen >> cur & 1 == 0 {
                seen |= 1 << cur;
                cycle.push(cur + 1);
                cur = self.image[cur] as usize;
            }
            cycles.push(cycle);
        }
        // starting each walk at the smallest unseen element already puts the
        // minimum first and sorts by minimum
        CycleDecomposition { cycles }
    }

    /// Least `k >= 1` with `π^k = id`.
    pub fn order(&self) -> u64 {
        self.cycle_decomposition()
            .lengths()
            .into_iter()
            .fold(1u64, |acc, l| num_integer_lcm(acc, l as u64))
    }

    pub fn classify_support(&self) -> SupportClass {
        match self.support().len() {
            0 => SupportClass::Identity,
            2 => SupportClass::Transposition,
            _ => SupportClass::SupportAtLeast3,
        }
    }

    /// Image of a raw mask.
    #[inline]
    pub fn apply_bits(&self, bits: u64) -> u64 {
        BitIter(bits).fold(0u64, |m, i| m | 1 << self.image[i])
    }

    pub fn apply_to_set(&self, x: SubsetMask) -> Result<SubsetMask, PermError> {
        if x.ground() != self.n() {
            return Err(PermError::Mismatch(self.n(), x.ground()));
        }
        Ok(SubsetMask::from_bits(self.n(), self.apply_bits(x.bits())))
    }

    /// `X, π(X), π²(X), ...` up to the first repeat.
    pub fn orbit_of_set(&self, x: SubsetMask) -> Result<Vec<SubsetMask>, PermError> {
        if x.ground() != self.n() {
            return Err(PermError::Mismatch(self.n(), x.ground()));
        }
        let mut orbit = vec![x];
        let mut cur = self.apply_bits(x.bits());
        while cur != x.bits() {
            orbit.push(SubsetMask::from_bits(self.n(), cur));
            cur = self.apply_bits(cur);
        }
        Ok(orbit)
    }

    /// The `r`-subsets fixed setwise, in increasing mask order.
    ///
    /// Built directly from unions of whole cycles and fixed points rather
    /// than by filtering all `r`-subsets.
    pub fn fixed_r_sets(&self, r: usize) -> Vec<SubsetMask> {
        let n = self.n();
        if r > n {
            return Vec::new();
        }
        let dec = self.cycle_decomposition();
        let fixed_points = !self.support().bits() & crate::subset::full_mask(n);
        let free = fixed_points.count_ones() as usize;
        let mut out = Vec::new();
        for chosen in 0u64..(1u64 << dec.cycle_count()) {
            let mut mask = 0u64;
            let mut size = 0usize;
            for j in BitIter(chosen) {
                mask |= dec.cycle_mask(j);
                size += dec.cycles[j].len();
            }
            if size > r || r - size > free {
                continue;
            }
            for pick in k_subsets(free, (r - size) as isize) {
                out.push(mask | crate::subset::deposit_bits(pick, fixed_points));
            }
        }
        out.sort_unstable();
        out.into_iter()
            .map(|b| SubsetMask::from_bits(n, b))
            .collect()
    }

    /// Every permutation of `[n]` in lexicographic image order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n as u8)
            .permutations(n)
            .map(|image| Permutation { image })
    }
}

fn num_integer_lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dec = self.cycle_decomposition();
        if dec.cycles.is_empty() {
            return f.write_str("()");
        }
        for c in &dec.cycles {
            write!(f, "({})", c.iter().join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on [{}]", self.n())
    }
}

/// Parses `"n:(cycles)"`, handy for tests and config files.
impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, cycles) = s
            .split_once(':')
            .ok_or_else(|| PermError::Parse(s.to_string()))?;
        let n = n
            .trim()
            .parse::<usize>()
            .map_err(|_| PermError::Parse(s.to_string()))?;
        Self::parse(n, cycles)
    }
}
