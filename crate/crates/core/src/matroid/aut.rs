//! Automorphism groups of matroids on small ground sets.
//!
//! Two searches: a filter over all `n!` permutations that serves as the
//! reference, and a backtracking search that extends a partial map one
//! element at a time. The backtracking search only pairs elements lying in
//! equally many non-bases, and rejects a partial map as soon as some
//! non-basis whose elements are all mapped lands on a basis.

use std::fmt;

use serde::Serialize;

use super::{Matroid, MatroidError};
use crate::permgroup::{Permutation, SupportClass};
use crate::subset::BitIter;

/// Refuses automorphism searches on ground sets larger than `max_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutBudget {
    pub max_n: usize,
}

impl Default for AutBudget {
    fn default() -> Self {
        Self { max_n: 9 }
    }
}

impl AutBudget {
    fn check(&self, n: usize) -> Result<(), MatroidError> {
        if n > self.max_n {
            return Err(MatroidError::AutBudgetExceeded {
                n,
                limit: self.max_n,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutKind {
    Trivial,
    SingleTransposition,
    Other,
}

impl fmt::Display for AutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trivial => "trivial",
            Self::SingleTransposition => "single_transposition",
            Self::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutClassification {
    pub kind: AutKind,
    /// The transposition `(e, f)`, `e < f`, when `kind` is
    /// `SingleTransposition`.
    pub generator_pair: Option<(usize, usize)>,
    pub group_order: u64,
}

/// Every automorphism, by filtering all `n!` permutations. Output is in
/// lexicographic image order.
pub fn automorphism_group_brute_force(
    m: &Matroid,
    budget: AutBudget,
) -> Result<Vec<Permutation>, MatroidError> {
    budget.check(m.n())?;
    Ok(Permutation::all(m.n())
        .filter(|p| m.is_automorphism_unchecked(p))
        .collect())
}

struct Search<'a> {
    m: &'a Matroid,
    n: usize,
    degree: Vec<usize>,
    /// Non-bases grouped by their largest element.
    by_top: Vec<Vec<u64>>,
    image: Vec<u8>,
}

impl<'a> Search<'a> {
    fn new(m: &'a Matroid) -> Self {
        let n = m.n();
        let mut degree = vec![0; n];
        let mut by_top = vec![Vec::new(); n];
        for &x in m.nonbasis_bits() {
            for i in BitIter(x) {
                degree[i] += 1;
            }
            if x != 0 {
                by_top[63 - x.leading_zeros() as usize].push(x);
            }
        }
        Self {
            m,
            n,
            degree,
            by_top,
            image: Vec::with_capacity(n),
        }
    }

    fn map(&self, x: u64) -> u64 {
        BitIter(x).fold(0, |acc, i| acc | 1 << self.image[i])
    }

    /// Visits every automorphism in lexicographic image order until `visit`
    /// returns `false`. Returns whether the walk ran to the end.
    fn run(&mut self, used: u64, visit: &mut impl FnMut(&[u8]) -> bool) -> bool {
        let i = self.image.len();
        if i == self.n {
            return visit(&self.image);
        }
        for v in 0..self.n {
            if used >> v & 1 == 1 || self.degree[v] != self.degree[i] {
                continue;
            }
            self.image.push(v as u8);
            let ok = self.by_top[i]
                .iter()
                .all(|&x| self.m.is_nonbasis_bits(self.map(x)));
            let go_on = !ok || self.run(used | 1 << v, visit);
            self.image.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Every automorphism, in lexicographic image order.
pub fn automorphism_group(
    m: &Matroid,
    budget: AutBudget,
) -> Result<Vec<Permutation>, MatroidError> {
    budget.check(m.n())?;
    let mut out = Vec::new();
    Search::new(m).run(0, &mut |img| {
        out.push(to_perm(img));
        true
    });
    Ok(out)
}

fn classify(order: u64, other: Option<&Permutation>) -> AutClassification {
    let pair = other.filter(|p| p.classify_support() == SupportClass::Transposition);
    match (order, pair) {
        (1, _) => AutClassification {
            kind: AutKind::Trivial,
            generator_pair: None,
            group_order: 1,
        },
        (2, Some(p)) => {
            let moved: Vec<usize> = p.support().elements().collect();
            AutClassification {
                kind: AutKind::SingleTransposition,
                generator_pair: Some((moved[0], moved[1])),
                group_order: 2,
            }
        }
        _ => AutClassification {
            kind: AutKind::Other,
            generator_pair: None,
            group_order: order,
        },
    }
}

fn to_perm(img: &[u8]) -> Permutation {
    Permutation::from_images(&img.iter().map(|&v| v as usize + 1).collect::<Vec<_>>())
        .expect("search yields bijections")
}

/// Group order and kind of `Aut(M)`.
pub fn automorphism_classification(
    m: &Matroid,
    budget: AutBudget,
) -> Result<AutClassification, MatroidError> {
    budget.check(m.n())?;
    let mut order = 0u64;
    let mut first_other = None;
    Search::new(m).run(0, &mut |img| {
        order += 1;
        if first_other.is_none() && img.iter().enumerate().any(|(i, &v)| i != v as usize) {
            first_other = Some(to_perm(img));
        }
        true
    });
    Ok(classify(order, first_other.as_ref()))
}

/// Kind of `Aut(M)` without the full group order: stops at the third
/// automorphism. `group_order` is exact for kinds `Trivial` and
/// `SingleTransposition` and a lower bound (3) otherwise.
pub fn aut_kind(m: &Matroid, budget: AutBudget) -> Result<AutClassification, MatroidError> {
    budget.check(m.n())?;
    let mut order = 0u64;
    let mut first_other = None;
    Search::new(m).run(0, &mut |img| {
        order += 1;
        if first_other.is_none() && img.iter().enumerate().any(|(i, &v)| i != v as usize) {
            first_other = Some(to_perm(img));
        }
        order < 3
    });
    Ok(classify(order, first_other.as_ref()))
}
