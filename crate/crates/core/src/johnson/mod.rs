//! The Johnson graph `J(n, r)` and its stable sets.
//!
//! Vertices are the `r`-subsets of `[n]`, adjacent when their symmetric
//! difference has exactly two elements. Vertex `i` is the `i`-th `r`-subset
//! in increasing mask order, so a stable set listed by vertex index is
//! already sorted by mask value.
//!
//! `J(n, r)` with `r < 0` or `r > n` is the empty graph: no vertices, one
//! stable set (`∅`).

pub mod graph;
mod invariant;
mod transposition;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::permgroup::PermError;
use crate::subset::{k_subsets, SubsetMask, MAX_GROUND};

pub use graph::{SmallGraph, VertexSet, VERTEX_CAPACITY};
pub use invariant::{
    check_pblock_bound, count_invariant_stable_sets, enumerate_invariant_stable_sets,
    orbit_closure, pblock_params, split_invariant, InvariantEnumeration, InvariantSplit,
};
pub use transposition::{
    box_product_graph, check_box_product_iso, check_fiber_bound, check_kbound,
    check_product_identity, filter_map_f, transposition_partition, FiberReport,
    TranspositionPartition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JohnsonError {
    #[error("J({n},{r}) has {vertices} vertices, over the budget of {limit}")]
    BudgetExceeded {
        n: usize,
        r: isize,
        vertices: u128,
        limit: usize,
    },
    #[error("vertex budget {0} is above the hard limit of {VERTEX_CAPACITY}")]
    BudgetTooLarge(usize),
    #[error("ground set of size {0} is not supported")]
    GroundTooLarge(usize),
    #[error("subsets have different cardinalities ({0} vs {1})")]
    CardinalityMismatch(usize, usize),
    #[error("{0} is not an r-subset of the ground set")]
    NotAVertex(SubsetMask),
    #[error("family is not a stable set: {0} and {1} are adjacent")]
    NotStable(SubsetMask, SubsetMask),
    #[error("stable set is not invariant under {0}")]
    NotInvariant(String),
    #[error("closure under {perm} is not stable: {a} and {b} are adjacent")]
    ClosureNotStable {
        perm: String,
        a: SubsetMask,
        b: SubsetMask,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

impl JohnsonError {
    pub fn is_budget(&self) -> bool {
        matches!(self, Self::BudgetExceeded { .. } | Self::BudgetTooLarge(_))
    }
}

/// Refuses to build graphs with more vertices than `max_vertices`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_vertices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_vertices: VERTEX_CAPACITY,
        }
    }
}

impl Budget {
    pub fn new(max_vertices: usize) -> Result<Self, JohnsonError> {
        if max_vertices > VERTEX_CAPACITY {
            return Err(JohnsonError::BudgetTooLarge(max_vertices));
        }
        Ok(Self { max_vertices })
    }

    pub fn max_vertices(&self) -> usize {
        self.max_vertices
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct JohnsonParams {
    pub n: usize,
    pub r: isize,
}

impl JohnsonParams {
    pub fn new(n: usize, r: isize) -> Self {
        Self { n, r }
    }

    /// Whether the graph has any vertices.
    pub fn in_range(&self) -> bool {
        self.r >= 0 && self.r as usize <= self.n
    }

    pub fn vertex_count(&self) -> u128 {
        crate::combinatorics::binomial_u128(self.n as u64, self.r as i64)
    }

    /// `r(n - r)`, the common vertex degree.
    pub fn degree(&self) -> u128 {
        if self.in_range() {
            self.r as u128 * (self.n - self.r as usize) as u128
        } else {
            0
        }
    }
}

impl fmt::Display for JohnsonParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({},{})", self.n, self.r)
    }
}

/// `J(n, r)` materialised as a bitset graph.
#[derive(Clone, Debug)]
pub struct JohnsonGraph {
    params: JohnsonParams,
    vertices: Vec<u64>,
    index: HashMap<u64, usize>,
    graph: SmallGraph,
}

impl JohnsonGraph {
    pub fn new(params: JohnsonParams, budget: Budget) -> Result<Self, JohnsonError> {
        if params.n > MAX_GROUND {
            return Err(JohnsonError::GroundTooLarge(params.n));
        }
        let count = params.vertex_count();
        if count > budget.max_vertices as u128 {
            return Err(JohnsonError::BudgetExceeded {
                n: params.n,
                r: params.r,
                vertices: count,
                limit: budget.max_vertices,
            });
        }
        let vertices = k_subsets(params.n, params.r);
        let index = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let graph = SmallGraph::from_fn(vertices.len(), |a, b| {
            (vertices[a] ^ vertices[b]).count_ones() == 2
        });
        Ok(Self {
            params,
            vertices,
            index,
            graph,
        })
    }

    pub fn params(&self) -> JohnsonParams {
        self.params
    }

    pub fn graph(&self) -> &SmallGraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// Raw mask of vertex `i`.
    pub fn vertex(&self, i: usize) -> u64 {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn subset(&self, i: usize) -> SubsetMask {
        SubsetMask::from_bits(self.params.n, self.vertices[i])
    }

    /// Materialises a stable set from vertex indices.
    pub fn stable_set(&self, indices: &[usize]) -> StableSet {
        let mut members: Vec<SubsetMask> = indices.iter().map(|&i| self.subset(i)).collect();
        members.sort_unstable();
        StableSet {
            params: self.params,
            members,
        }
    }

    /// Vertex indices of a family, validating membership.
    pub fn indices_of(&self, family: &[SubsetMask]) -> Result<Vec<usize>, JohnsonError> {
        family
            .iter()
            .map(|x| {
                if x.ground() != self.params.n {
                    return Err(JohnsonError::NotAVertex(*x));
                }
                self.index_of(x.bits()).ok_or(JohnsonError::NotAVertex(*x))
            })
            .collect()
    }
}

/// A family of `r`-subsets, pairwise non-adjacent in `J(n, r)`, sorted by
/// mask value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StableSet {
    params: JohnsonParams,
    members: Vec<SubsetMask>,
}

impl StableSet {
    pub fn empty(params: JohnsonParams) -> Self {
        Self {
            params,
            members: Vec::new(),
        }
    }

    /// Validates cardinalities and pairwise `|X △ Y| >= 4`; sorts and
    /// de-duplicates.
    pub fn new(params: JohnsonParams, mut members: Vec<SubsetMask>) -> Result<Self, JohnsonError> {
        for x in &members {
            if x.ground() != params.n || !params.in_range() || x.len() as isize != params.r {
                return Err(JohnsonError::NotAVertex(*x));
            }
        }
        members.sort_unstable();
        members.dedup();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.symmetric_difference(*b).len() == 2 {
                    return Err(JohnsonError::NotStable(*a, *b));
                }
            }
        }
        Ok(Self { params, members })
    }

    pub fn params(&self) -> JohnsonParams {
        self.params
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: SubsetMask) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn into_members(self) -> Vec<SubsetMask> {
        self.members
    }
}

/// Line format: members as braced element lists joined by commas, e.g.
/// `{1,2},{3,4}`. The empty family prints as an empty string.
impl fmt::Display for StableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Whether `x` and `y` are adjacent in the Johnson graph.
pub fn adjacent(x: SubsetMask, y: SubsetMask) -> Result<bool, JohnsonError> {
    if x.len() != y.len() {
        return Err(JohnsonError::CardinalityMismatch(x.len(), y.len()));
    }
    Ok(x.symmetric_difference(y).len() == 2)
}

/// `i(J(n, r))`: all stable sets, `∅` included.
pub fn count_stable_sets(params: JohnsonParams, budget: Budget) -> Result<u128, JohnsonError> {
    Ok(stable_set_polynomial(params, budget)?.iter().sum())
}

/// `i_k(J(n, r))`: stable sets with exactly `k` members.
pub fn count_stable_sets_by_size(
    params: JohnsonParams,
    k: usize,
    budget: Budget,
) -> Result<u128, JohnsonError> {
    Ok(stable_set_polynomial(params, budget)?
        .get(k)
        .copied()
        .unwrap_or(0))
}

/// Independence polynomial of `J(n, r)`.
pub fn stable_set_polynomial(
    params: JohnsonParams,
    budget: Budget,
) -> Result<Vec<u128>, JohnsonError> {
    if !params.in_range() {
        return Ok(vec![1]);
    }
    let g = JohnsonGraph::new(params, budget)?;
    Ok(graph::independence_polynomial(g.graph()))
}

/// Every stable set of `J(n, r)`, in canonical (lexicographic) order.
pub fn stable_sets(params: JohnsonParams, budget: Budget) -> Result<Vec<StableSet>, JohnsonError> {
    if !params.in_range() {
        return Ok(vec![StableSet::empty(params)]);
    }
    let g = JohnsonGraph::new(params, budget)?;
    let mut out = Vec::new();
    graph::for_each_stable_set(g.graph(), |s| out.push(g.stable_set(s)));
    Ok(out)
}

/// Counts stable sets by explicit enumeration rather than the polynomial
/// recursion.
pub fn count_stable_sets_by_enumeration(
    params: JohnsonParams,
    budget: Budget,
) -> Result<u128, JohnsonError> {
    if !params.in_range() {
        return Ok(1);
    }
    let g = JohnsonGraph::new(params, budget)?;
    Ok(graph::par_fold_stable_sets(
        g.graph(),
        || 0u128,
        |acc, _| *acc += 1,
        |a, b| a + b,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Permutation;

    fn set(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn j(n: usize, r: isize) -> JohnsonParams {
        JohnsonParams::new(n, r)
    }

    /// Brute force over every family of vertices.
    fn brute_count(params: JohnsonParams) -> Vec<u128> {
        let verts = k_subsets(params.n, params.r);
        assert!(verts.len() <= 20);
        let mut poly = vec![0u128; verts.len() + 1];
        for fam in 0u64..1 << verts.len() {
            let members: Vec<u64> = crate::subset::BitIter(fam).map(|i| verts[i]).collect();
            let ok = members
                .iter()
                .enumerate()
                .all(|(i, a)| members[i + 1..].iter().all(|b| (a ^ b).count_ones() != 2));
            if ok {
                poly[members.len()] += 1;
            }
        }
        while poly.len() > 1 && poly.last() == Some(&0) {
            poly.pop();
        }
        poly
    }

    #[test]
    fn adjacency_examples() {
        assert!(adjacent(set(4, &[1, 2]), set(4, &[1, 3])).unwrap());
        assert!(!adjacent(set(4, &[1, 2]), set(4, &[3, 4])).unwrap());
        let x = set(4, &[2, 4]);
        assert!(!adjacent(x, x).unwrap());
        assert_eq!(
            adjacent(set(4, &[1]), set(4, &[1, 2])),
            Err(JohnsonError::CardinalityMismatch(1, 2))
        );
    }

    #[test]
    fn count_examples() {
        let b = Budget::default();
        assert_eq!(count_stable_sets(j(5, 0), b).unwrap(), 2);
        assert_eq!(count_stable_sets(j(3, 1), b).unwrap(), 4);
        assert_eq!(count_stable_sets(j(4, 2), b).unwrap(), 10);
        assert_eq!(count_stable_sets(j(4, 5), b).unwrap(), 1);
        assert_eq!(count_stable_sets(j(4, -1), b).unwrap(), 1);
        assert_eq!(count_stable_sets_by_size(j(4, 2), 1, b).unwrap(), 6);
        assert_eq!(count_stable_sets_by_size(j(4, 2), 2, b).unwrap(), 3);
        assert_eq!(count_stable_sets_by_size(j(4, 2), 3, b).unwrap(), 0);
        for n in 0..=6 {
            for r in -1..=n as isize + 1 {
                assert_eq!(count_stable_sets_by_size(j(n, r), 0, b).unwrap(), 1);
            }
        }
    }

    #[test]
    fn polynomial_matches_brute_force_on_small_graphs() {
        let b = Budget::default();
        for n in 0..=6 {
            for r in 0..=n as isize {
                let params = j(n, r);
                let poly = stable_set_polynomial(params, b).unwrap();
                assert_eq!(poly, brute_count(params), "{params}");
                if poly.len() > 1 {
                    assert_eq!(poly[1], params.vertex_count());
                }
            }
        }
    }

    #[test]
    fn enumeration_and_polynomial_agree_up_to_7() {
        let b = Budget::default();
        for n in 0..=7 {
            for r in 0..=n as isize {
                let params = j(n, r);
                let by_poly = count_stable_sets(params, b).unwrap();
                assert_eq!(
                    by_poly,
                    count_stable_sets_by_enumeration(params, b).unwrap()
                );
                assert_eq!(by_poly, stable_sets(params, b).unwrap().len() as u128);
                // complementation symmetry
                assert_eq!(by_poly, count_stable_sets(j(n, n as isize - r), b).unwrap());
            }
        }
    }

    #[test]
    fn degree_and_vertex_count() {
        for n in 1..=7 {
            for r in 0..=n as isize {
                let g = JohnsonGraph::new(j(n, r), Budget::default()).unwrap();
                assert_eq!(g.order() as u128, j(n, r).vertex_count());
                for v in 0..g.order() {
                    assert_eq!(g.graph().neighbours(v).len() as u128, j(n, r).degree());
                }
            }
        }
    }

    #[test]
    fn stability_is_hereditary() {
        let b = Budget::default();
        for n in 4..=7 {
            for r in 1..n as isize {
                for s in stable_sets(j(n, r), b).unwrap().iter().step_by(7) {
                    let m = s.members();
                    for drop in 0..m.len() {
                        let mut sub = m.to_vec();
                        sub.remove(drop);
                        assert!(StableSet::new(s.params(), sub).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn permutations_preserve_adjacency() {
        for n in 1..=6 {
            for r in 0..=n as isize {
                let verts = k_subsets(n, r);
                for p in Permutation::all(n) {
                    for &x in &verts {
                        for &y in &verts {
                            let before = (x ^ y).count_ones() == 2;
                            let after = (p.apply_bits(x) ^ p.apply_bits(y)).count_ones() == 2;
                            assert_eq!(before, after);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let tight = Budget::new(10).unwrap();
        assert!(count_stable_sets(j(5, 2), tight).is_ok());
        let err = count_stable_sets(j(6, 3), tight).unwrap_err();
        assert!(err.is_budget());
        assert!(Budget::new(257).unwrap_err().is_budget());
        // C(10,5) = 252 fits the default budget, C(10,4) = 210 too
        assert!(JohnsonGraph::new(j(10, 5), Budget::default()).is_ok());
        assert!(JohnsonGraph::new(j(11, 5), Budget::default())
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn stable_set_display_and_validation() {
        let params = j(4, 2);
        let s = StableSet::new(params, vec![set(4, &[3, 4]), set(4, &[1, 2])]).unwrap();
        assert_eq!(s.to_string(), "{1,2},{3,4}");
        assert_eq!(StableSet::empty(params).to_string(), "");
        assert!(matches!(
            StableSet::new(params, vec![set(4, &[1, 2]), set(4, &[1, 3])]),
            Err(JohnsonError::NotStable(..))
        ));
        assert!(matches!(
            StableSet::new(params, vec![set(4, &[1])]),
            Err(JohnsonError::NotAVertex(_))
        ));
    }
}
