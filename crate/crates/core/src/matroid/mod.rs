//! Matroids stored by their non-bases.
//!
//! The basis-exchange axiom is the only axiom checked; rank, circuits and
//! hyperplanes are all derived from `rank(S) = max |S ∩ B|` over bases.

mod aut;
pub mod io;
mod minors;

use std::fmt;

use thiserror::Error;

use crate::johnson::{JohnsonError, JohnsonParams, StableSet};
use crate::permgroup::Permutation;
use crate::subset::{full_mask, k_subsets, BitIter, SubsetMask, MAX_GROUND};

pub use aut::{
    aut_kind, automorphism_classification, automorphism_group, automorphism_group_brute_force,
    AutBudget, AutClassification, AutKind,
};
pub use minors::{contract_pair, delete_pair, reconstruct_from_minors};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("rank {r} is outside 0..={n}")]
    InvalidRank { n: usize, r: usize },
    #[error("ground set of size {0} is not supported")]
    GroundTooLarge(usize),
    #[error("{set} is not an {r}-subset of [{n}]")]
    WrongSize { set: String, n: usize, r: usize },
    #[error("non-basis {0} is listed twice")]
    Duplicate(SubsetMask),
    #[error("every {r}-subset of [{n}] is a non-basis, so there is no basis")]
    NoBasis { n: usize, r: usize },
    #[error("basis exchange fails: B1 = {b1}, B2 = {b2}, x = {x}: no y in B2 \\ B1 makes B1 - x + y a basis")]
    ExchangeViolation {
        b1: SubsetMask,
        b2: SubsetMask,
        x: usize,
    },
    #[error("the matroid is not sparse paving")]
    NotSparsePaving,
    #[error("ground sets differ ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("({e} {f}) is not a pair of distinct elements of [{n}]")]
    BadPair { n: usize, e: usize, f: usize },
    #[error("ground set of size {n} is over the automorphism budget of {limit}")]
    AutBudgetExceeded { n: usize, limit: usize },
    #[error("the minors do not come from a matroid with ({e} {f}) as an automorphism: {reason}")]
    PromiseViolation { e: usize, f: usize, reason: String },
    #[error("malformed matroid file: {0}")]
    Format(String),
    #[error(transparent)]
    Johnson(#[from] JohnsonError),
}

impl MatroidError {
    pub fn is_budget(&self) -> bool {
        matches!(self, Self::AutBudgetExceeded { .. })
            || matches!(self, Self::Johnson(j) if j.is_budget())
    }
}

/// A matroid on `[n]` of rank `r`. Non-bases are kept sorted by mask value,
/// so equal matroids are equal values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    n: usize,
    r: usize,
    nonbases: Vec<u64>,
}

/// `U(M)` and `W(M)`: non-bases that are not, and that are,
/// circuit-hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UWSplit {
    pub u_part: Vec<SubsetMask>,
    pub w_part: Vec<SubsetMask>,
}

impl Matroid {
    /// Checks sizes, duplicates, existence of a basis and basis exchange.
    pub fn validate(n: usize, r: usize, nonbases: &[SubsetMask]) -> Result<Self, MatroidError> {
        check_shape(n, r)?;
        let mut bits = Vec::with_capacity(nonbases.len());
        for x in nonbases {
            if x.ground() != n || x.len() != r {
                return Err(MatroidError::WrongSize {
                    set: x.to_string(),
                    n,
                    r,
                });
            }
            bits.push(x.bits());
        }
        Self::validate_bits(n, r, bits)
    }

    /// As [`Matroid::validate`], on raw masks.
    pub fn validate_bits(n: usize, r: usize, mut nonbases: Vec<u64>) -> Result<Self, MatroidError> {
        check_shape(n, r)?;
        for &x in &nonbases {
            if x & !full_mask(n) != 0 || x.count_ones() as usize != r {
                return Err(MatroidError::WrongSize {
                    set: format!("{:?}", BitIter(x).map(|i| i + 1).collect::<Vec<_>>()),
                    n,
                    r,
                });
            }
        }
        nonbases.sort_unstable();
        if let Some(w) = nonbases.windows(2).find(|w| w[0] == w[1]) {
            return Err(MatroidError::Duplicate(SubsetMask::from_bits(n, w[0])));
        }
        let m = Self { n, r, nonbases };
        m.check_exchange()?;
        Ok(m)
    }

    /// Builds from a basis family, validating.
    pub fn from_bases(n: usize, r: usize, bases: &[u64]) -> Result<Self, MatroidError> {
        check_shape(n, r)?;
        let mut sorted = bases.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let nonbases = k_subsets(n, r as isize)
            .into_iter()
            .filter(|x| sorted.binary_search(x).is_err())
            .collect();
        Self::validate_bits(n, r, nonbases)
    }

    /// Skips validation; callers guarantee the axioms.
    pub(crate) fn from_sorted_unchecked(n: usize, r: usize, nonbases: Vec<u64>) -> Self {
        debug_assert!(nonbases.windows(2).all(|w| w[0] < w[1]));
        Self { n, r, nonbases }
    }

    /// `U_{r,n}`.
    pub fn uniform(n: usize, r: usize) -> Result<Self, MatroidError> {
        check_shape(n, r)?;
        Ok(Self {
            n,
            r,
            nonbases: Vec::new(),
        })
    }

    fn check_exchange(&self) -> Result<(), MatroidError> {
        let bases = self.bases();
        if bases.is_empty() {
            return Err(MatroidError::NoBasis {
                n: self.n,
                r: self.r,
            });
        }
        for &b1 in &bases {
            for &b2 in &bases {
                for x in BitIter(b1 & !b2) {
                    let rest = b1 & !(1 << x);
                    if !BitIter(b2 & !b1).any(|y| self.is_basis_bits(rest | 1 << y)) {
                        return Err(MatroidError::ExchangeViolation {
                            b1: SubsetMask::from_bits(self.n, b1),
                            b2: SubsetMask::from_bits(self.n, b2),
                            x: x + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn nonbasis_bits(&self) -> &[u64] {
        &self.nonbases
    }

    pub fn nonbases(&self) -> Vec<SubsetMask> {
        self.nonbases
            .iter()
            .map(|&b| SubsetMask::from_bits(self.n, b))
            .collect()
    }

    /// All bases, in increasing mask order.
    pub fn bases(&self) -> Vec<u64> {
        k_subsets(self.n, self.r as isize)
            .into_iter()
            .filter(|x| self.nonbases.binary_search(x).is_err())
            .collect()
    }

    #[inline]
    pub fn is_nonbasis_bits(&self, x: u64) -> bool {
        self.nonbases.binary_search(&x).is_ok()
    }

    /// Whether `x` is an `r`-set that is not a non-basis.
    #[inline]
    pub fn is_basis_bits(&self, x: u64) -> bool {
        x.count_ones() as usize == self.r
            && x & !full_mask(self.n) == 0
            && !self.is_nonbasis_bits(x)
    }

    pub fn is_basis(&self, x: SubsetMask) -> bool {
        x.ground() == self.n && self.is_basis_bits(x.bits())
    }

    pub fn rank_of(&self, s: SubsetMask) -> Result<usize, MatroidError> {
        if s.ground() != self.n {
            return Err(MatroidError::GroundMismatch(self.n, s.ground()));
        }
        Ok(self.rank_bits(s.bits()))
    }

    /// `max |S ∩ B|` over bases `B`.
    pub fn rank_bits(&self, s: u64) -> usize {
        let s = s & full_mask(self.n);
        let size = s.count_ones() as usize;
        // fast path: an independent set of the right size is a basis
        if size == self.r && !self.is_nonbasis_bits(s) {
            return self.r;
        }
        let mut best = 0;
        for b in k_subsets(self.n, self.r as isize) {
            if self.is_nonbasis_bits(b) {
                continue;
            }
            best = best.max((b & s).count_ones() as usize);
            if best == size.min(self.r) {
                break;
            }
        }
        best
    }

    pub fn is_independent_bits(&self, s: u64) -> bool {
        self.rank_bits(s) == s.count_ones() as usize
    }

    /// Every proper subset independent, `X` itself dependent.
    pub fn is_circuit_bits(&self, x: u64) -> bool {
        !self.is_independent_bits(x) && BitIter(x).all(|i| self.is_independent_bits(x & !(1 << i)))
    }

    /// Rank `r - 1` and closed.
    pub fn is_hyperplane_bits(&self, x: u64) -> bool {
        self.r >= 1
            && self.rank_bits(x) == self.r - 1
            && BitIter(full_mask(self.n) & !x).all(|g| self.rank_bits(x | 1 << g) == self.r)
    }

    pub fn uw_split(&self) -> UWSplit {
        let mut split = UWSplit {
            u_part: Vec::new(),
            w_part: Vec::new(),
        };
        for &x in &self.nonbases {
            let part = if self.is_circuit_bits(x) && self.is_hyperplane_bits(x) {
                &mut split.w_part
            } else {
                &mut split.u_part
            };
            part.push(SubsetMask::from_bits(self.n, x));
        }
        split
    }

    /// Every circuit has at least `r` elements, i.e. every `(r-1)`-set is
    /// independent.
    pub fn is_paving(&self) -> bool {
        self.r == 0
            || k_subsets(self.n, self.r as isize - 1)
                .into_iter()
                .all(|s| self.is_independent_bits(s))
    }

    /// `U(M) = ∅`.
    pub fn is_sparse_paving(&self) -> bool {
        self.uw_split().u_part.is_empty()
    }

    /// Non-bases pairwise at symmetric-difference distance at least 4.
    pub fn nonbases_stable(&self) -> bool {
        self.nonbases.iter().enumerate().all(|(i, a)| {
            self.nonbases[i + 1..]
                .iter()
                .all(|b| (a ^ b).count_ones() != 2)
        })
    }

    /// Bases are the complements of bases.
    pub fn dual(&self) -> Self {
        let full = full_mask(self.n);
        let mut nonbases: Vec<u64> = self.nonbases.iter().map(|x| full & !x).collect();
        nonbases.sort_unstable();
        Self {
            n: self.n,
            r: self.n - self.r,
            nonbases,
        }
    }

    /// Whether `p` maps non-bases onto non-bases.
    pub fn is_automorphism(&self, p: &Permutation) -> Result<bool, MatroidError> {
        if p.n() != self.n {
            return Err(MatroidError::GroundMismatch(self.n, p.n()));
        }
        Ok(self.is_automorphism_unchecked(p))
    }

    pub(crate) fn is_automorphism_unchecked(&self, p: &Permutation) -> bool {
        self.nonbases
            .iter()
            .all(|&x| self.is_nonbasis_bits(p.apply_bits(x)))
    }

    /// The sparse paving matroid whose non-bases are `i`.
    pub fn from_stable_set(i: &StableSet) -> Result<Self, MatroidError> {
        let params = i.params();
        if !params.in_range() {
            return Err(MatroidError::InvalidRank {
                n: params.n,
                r: params.r.max(0) as usize,
            });
        }
        let (n, r) = (params.n, params.r as usize);
        check_shape(n, r)?;
        if i.len() as u128 >= params.vertex_count() {
            return Err(MatroidError::NoBasis { n, r });
        }
        // stable non-bases always satisfy exchange
        Ok(Self::from_sorted_unchecked(
            n,
            r,
            i.members().iter().map(|x| x.bits()).collect(),
        ))
    }

    /// The non-bases of a sparse paving matroid as a stable set.
    pub fn to_stable_set(&self) -> Result<StableSet, MatroidError> {
        if !self.nonbases_stable() {
            return Err(MatroidError::NotSparsePaving);
        }
        Ok(StableSet::new(
            JohnsonParams::new(self.n, self.r as isize),
            self.nonbases(),
        )?)
    }
}

fn check_shape(n: usize, r: usize) -> Result<(), MatroidError> {
    if n > MAX_GROUND {
        return Err(MatroidError::GroundTooLarge(n));
    }
    if r > n {
        return Err(MatroidError::InvalidRank { n, r });
    }
    Ok(())
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, r={}, nonbases=[", self.n, self.r)?;
        for (i, x) in self.nonbases().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("])")
    }
}

/// Every matroid on `[n]` of rank `r`, by brute force over all non-basis
/// families. Test oracle only; feasible for `C(n, r) <= 20` or so.
#[doc(hidden)]
pub fn all_matroids_brute_force(n: usize, r: usize) -> Vec<Matroid> {
    let subsets = k_subsets(n, r as isize);
    assert!(
        subsets.len() <= 20,
        "brute force over 2^{} families",
        subsets.len()
    );
    let mut out = Vec::new();
    for fam in 0u64..1 << subsets.len() {
        let nonbases: Vec<u64> = BitIter(fam).map(|i| subsets[i]).collect();
        if let Ok(m) = Matroid::validate_bits(n, r, nonbases) {
            out.push(m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::johnson::{stable_sets, Budget};

    fn set(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn parallel_pair() -> Matroid {
        Matroid::validate(4, 2, &[set(4, &[1, 2])]).unwrap()
    }

    fn loop_matroid() -> Matroid {
        Matroid::validate(4, 2, &[set(4, &[1, 2]), set(4, &[1, 3]), set(4, &[1, 4])]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            Matroid::validate(4, 2, &[]).unwrap(),
            Matroid::uniform(4, 2).unwrap()
        );
        assert_eq!(parallel_pair().bases().len(), 5);
        let err = Matroid::validate(4, 2, &[set(4, &[1, 2]), set(4, &[1, 3])]).unwrap_err();
        assert!(
            matches!(err, MatroidError::ExchangeViolation { .. }),
            "{err}"
        );
        assert!(matches!(
            Matroid::validate(4, 2, &[set(4, &[1])]),
            Err(MatroidError::WrongSize { .. })
        ));
        assert!(matches!(
            Matroid::validate(4, 2, &[set(4, &[1, 2]), set(4, &[1, 2])]),
            Err(MatroidError::Duplicate(_))
        ));
        let all: Vec<SubsetMask> = k_subsets(3, 1)
            .iter()
            .map(|&b| SubsetMask::from_bits(3, b))
            .collect();
        assert!(matches!(
            Matroid::validate(3, 1, &all),
            Err(MatroidError::NoBasis { .. })
        ));
        assert!(Matroid::validate(0, 0, &[]).is_ok());
    }

    #[test]
    fn exchange_violation_is_real() {
        // the reported triple must witness the failure
        let err = Matroid::validate(4, 2, &[set(4, &[1, 2]), set(4, &[1, 3])]).unwrap_err();
        let MatroidError::ExchangeViolation { b1, b2, x } = err else {
            unreachable!()
        };
        let bad = [set(4, &[1, 2]).bits(), set(4, &[1, 3]).bits()];
        let is_basis = |m: u64| !bad.contains(&m);
        assert!(is_basis(b1.bits()) && is_basis(b2.bits()));
        assert!(b1.contains(x) && !b2.contains(x));
        for y in b2.difference(b1).elements() {
            assert!(!is_basis(b1.without(x).with(y).bits()));
        }
    }

    #[test]
    fn rank_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.rank_of(set(4, &[1])).unwrap(), 1);
        assert_eq!(parallel_pair().rank_of(set(4, &[1, 2])).unwrap(), 1);
        assert_eq!(parallel_pair().rank_of(SubsetMask::empty(4)).unwrap(), 0);
        assert_eq!(parallel_pair().rank_of(SubsetMask::full(4)).unwrap(), 2);
        assert_eq!(loop_matroid().rank_of(set(4, &[1])).unwrap(), 0);
    }

    #[test]
    fn uw_examples() {
        let s = parallel_pair().uw_split();
        assert_eq!(s.w_part, vec![set(4, &[1, 2])]);
        assert!(s.u_part.is_empty());
        let s = Matroid::uniform(4, 2).unwrap().uw_split();
        assert!(s.u_part.is_empty() && s.w_part.is_empty());
        let s = loop_matroid().uw_split();
        assert!(s.w_part.is_empty());
        assert_eq!(s.u_part.len(), 3);
    }

    #[test]
    fn paving_examples() {
        assert!(parallel_pair().is_sparse_paving());
        assert!(parallel_pair().is_paving());
        assert!(!loop_matroid().is_sparse_paving());
        assert!(!loop_matroid().is_paving());
        let u = Matroid::uniform(4, 2).unwrap();
        assert!(u.is_paving() && u.is_sparse_paving());
    }

    #[test]
    fn dual_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(u.dual(), u);
        let d = parallel_pair().dual();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.nonbases(), vec![set(4, &[3, 4])]);
        assert_eq!(d.dual(), parallel_pair());
    }

    #[test]
    fn automorphism_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        for p in Permutation::all(4) {
            assert!(u.is_automorphism(&p).unwrap());
        }
        let m = parallel_pair();
        assert!(m
            .is_automorphism(&Permutation::parse(4, "(1 2)").unwrap())
            .unwrap());
        assert!(!m
            .is_automorphism(&Permutation::parse(4, "(2 3)").unwrap())
            .unwrap());
    }

    #[test]
    fn stable_set_correspondence() {
        let b = Budget::default();
        let params = JohnsonParams::new(4, 2);
        let empty = StableSet::empty(params);
        assert_eq!(
            Matroid::from_stable_set(&empty).unwrap(),
            Matroid::uniform(4, 2).unwrap()
        );
        let one = StableSet::new(params, vec![set(4, &[1, 2])]).unwrap();
        assert_eq!(Matroid::from_stable_set(&one).unwrap(), parallel_pair());
        let all = stable_sets(params, b).unwrap();
        let mut ms: Vec<Matroid> = all
            .iter()
            .map(|s| Matroid::from_stable_set(s).unwrap())
            .collect();
        for (s, m) in all.iter().zip(&ms) {
            assert_eq!(&m.to_stable_set().unwrap(), s);
        }
        ms.sort();
        ms.dedup();
        assert_eq!(ms.len(), 10);
        assert!(matches!(
            loop_matroid().to_stable_set(),
            Err(MatroidError::NotSparsePaving)
        ));
        // J(1,1) has one vertex; taking it leaves no basis
        let full = StableSet::new(JohnsonParams::new(1, 1), vec![SubsetMask::full(1)]).unwrap();
        assert!(matches!(
            Matroid::from_stable_set(&full),
            Err(MatroidError::NoBasis { .. })
        ));
    }

    #[test]
    fn stable_sets_always_validate() {
        let b = Budget::default();
        for n in 1..=6 {
            for r in 0..=n {
                for s in stable_sets(JohnsonParams::new(n, r as isize), b).unwrap() {
                    if s.len() as u128 == JohnsonParams::new(n, r as isize).vertex_count() {
                        continue;
                    }
                    let m = Matroid::from_stable_set(&s).unwrap();
                    Matroid::validate_bits(n, r, m.nonbasis_bits().to_vec()).unwrap();
                    assert!(m.is_sparse_paving());
                }
            }
        }
    }

    #[test]
    fn brute_force_matroid_properties() {
        // labelled matroids on [n] by rank: rank 1 is a nonempty set of
        // parallel non-loops (2^n - 1), rank 2 is a choice of non-loops split
        // into at least two parallel classes (sum of C(n,k)(Bell(k) - 1)),
        // the rest by duality; totals 1, 2, 5, 16, 68, 406
        let expected: [&[usize]; 6] = [
            &[1],
            &[1, 1],
            &[1, 3, 1],
            &[1, 7, 7, 1],
            &[1, 15, 36, 15, 1],
            &[1, 31, 171, 171, 31, 1],
        ];
        for (n, row) in expected.iter().enumerate() {
            for (r, &want) in row.iter().enumerate() {
                let all = all_matroids_brute_force(n, r);
                assert_eq!(all.len(), want, "m({n},{r})");
                for m in &all {
                    let split = m.uw_split();
                    assert_eq!(
                        split.u_part.len() + split.w_part.len(),
                        m.nonbasis_bits().len()
                    );
                    let w = StableSet::new(JohnsonParams::new(n, r as isize), split.w_part.clone());
                    assert!(w.is_ok(), "W(M) not stable for {m:?}");
                    assert_eq!(m.is_sparse_paving(), m.is_paving() && m.dual().is_paving());
                    assert_eq!(m.is_sparse_paving(), m.nonbases_stable());
                    assert_eq!(m.dual().dual(), *m);
                    assert_eq!(m.rank_bits(full_mask(n)), r);
                }
            }
        }
    }
}
