//! Every matroid on `[n]` of rank `r`, by depth-first search over the
//! `r`-subsets in increasing mask order.
//!
//! Each subset is decided basis or non-basis in turn. An exchange triple
//! `(B1, B2, x)` involves `B1`, `B2` and the swaps `B1 - x + y`,
//! `y ∈ B2 \ B1`; it is checked at the step that decides the last of these,
//! so a branch is cut as soon as a violation is forced.

use rayon::prelude::*;

use crate::matroid::Matroid;
use crate::subset::{k_subsets, BitIter};

/// Subsets decided sequentially before the search forks.
const SPLIT_DEPTH: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    Basis,
    NonBasis,
}

struct Search {
    n: usize,
    r: usize,
    subsets: Vec<u64>,
    /// Position of each `r`-subset in `subsets`, indexed by mask.
    index: Vec<u32>,
    state: Vec<State>,
}

impl Search {
    fn new(n: usize, r: usize) -> Self {
        assert!(n <= 16, "full enumeration is limited to small ground sets");
        let subsets = k_subsets(n, r as isize);
        let mut index = vec![u32::MAX; 1 << n];
        for (i, &s) in subsets.iter().enumerate() {
            index[s as usize] = i as u32;
        }
        let state = vec![State::Open; subsets.len()];
        Self {
            n,
            r,
            subsets,
            index,
            state,
        }
    }

    fn state_of(&self, mask: u64) -> State {
        self.state[self.index[mask as usize] as usize]
    }

    /// Whether the triple `(b1, b2, x)` is fully decided and violated.
    fn violated(&self, b1: u64, b2: u64, x: usize) -> bool {
        let rest = b1 & !(1 << x);
        let mut all_decided = true;
        for y in BitIter(b2 & !b1) {
            match self.state_of(rest | 1 << y) {
                State::Basis => return false,
                State::Open => all_decided = false,
                State::NonBasis => {}
            }
        }
        all_decided
    }

    /// Whether deciding subset `d` forced a violation.
    fn conflict(&self, d: usize) -> bool {
        let s = self.subsets[d];
        let decided = &self.subsets[..=d];
        let is_basis = |i: usize| self.state[i] == State::Basis;
        if is_basis(d) {
            for (i, &other) in decided.iter().enumerate() {
                if i == d || !is_basis(i) {
                    continue;
                }
                if BitIter(s & !other).any(|x| self.violated(s, other, x))
                    || BitIter(other & !s).any(|x| self.violated(other, s, x))
                {
                    return true;
                }
            }
            false
        } else {
            // s = b1 - x + y for some decided basis b1
            let full = (1u64 << self.n) - 1;
            for y in BitIter(s) {
                for x in BitIter(full & !s) {
                    let b1 = s & !(1 << y) | 1 << x;
                    if self.state_of(b1) != State::Basis {
                        continue;
                    }
                    for (i, &b2) in decided.iter().enumerate() {
                        if is_basis(i)
                            && b2 >> y & 1 == 1
                            && b2 >> x & 1 == 0
                            && self.violated(b1, b2, x)
                        {
                            return true;
                        }
                    }
                }
            }
            false
        }
    }

    fn matroid(&self) -> Option<Matroid> {
        if !self.state.contains(&State::Basis) {
            return None;
        }
        let nonbases = self
            .subsets
            .iter()
            .zip(&self.state)
            .filter(|(_, &st)| st == State::NonBasis)
            .map(|(&s, _)| s)
            .collect();
        Some(Matroid::from_sorted_unchecked(self.n, self.r, nonbases))
    }

    fn run(&mut self, d: usize, visit: &mut impl FnMut(Matroid)) {
        if d == self.subsets.len() {
            if let Some(m) = self.matroid() {
                visit(m);
            }
            return;
        }
        for choice in [State::Basis, State::NonBasis] {
            self.state[d] = choice;
            if !self.conflict(d) {
                self.run(d + 1, visit);
            }
        }
        self.state[d] = State::Open;
    }

    /// Consistent decision prefixes of length `depth`, in search order.
    fn prefixes(&mut self, d: usize, depth: usize, out: &mut Vec<Vec<State>>) {
        if d == depth {
            out.push(self.state[..d].to_vec());
            return;
        }
        for choice in [State::Basis, State::NonBasis] {
            self.state[d] = choice;
            if !self.conflict(d) {
                self.prefixes(d + 1, depth, out);
            }
        }
        self.state[d] = State::Open;
    }
}

/// Calls `visit` on every matroid on `[n]` of rank `r`, in a fixed order.
pub fn for_each_matroid(n: usize, r: usize, mut visit: impl FnMut(Matroid)) {
    if r > n {
        return;
    }
    Search::new(n, r).run(0, &mut visit);
}

/// Parallel fold over every matroid on `[n]` of rank `r`. Partial results
/// are merged in search order, so `merge` sees the same sequence on any
/// thread count.
pub fn par_fold_matroids<T, I, F, M>(n: usize, r: usize, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, Matroid) + Sync,
    M: Fn(T, T) -> T,
{
    if r > n {
        return init();
    }
    let mut root = Search::new(n, r);
    let depth = SPLIT_DEPTH.min(root.subsets.len());
    let mut prefixes = Vec::new();
    root.prefixes(0, depth, &mut prefixes);
    let parts: Vec<T> = prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut s = Search::new(n, r);
            s.state[..prefix.len()].copy_from_slice(&prefix);
            let mut acc = init();
            s.run(prefix.len(), &mut |m| fold(&mut acc, m));
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

/// All matroids on `[n]` of rank `r`, sorted.
pub fn all_matroids(n: usize, r: usize) -> Vec<Matroid> {
    let mut out = par_fold_matroids(
        n,
        r,
        Vec::new,
        |acc, m| acc.push(m),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    out.sort_unstable();
    out
}
