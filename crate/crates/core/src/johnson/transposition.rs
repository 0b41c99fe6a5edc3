//! Structure of `J(n, r)` relative to a transposition `(e f)`.
//!
//! Vertices split by their intersection with `{e, f}` into `V_∅`, `V_e`,
//! `V_f` and `V_ef`. The `(e f)`-invariant stable sets live in
//! `V_∅ ∪ V_ef`, whose two classes carry no edges between them, and
//! `V_e ∪ V_f` induces `J(n-2, r-1) □ K₂`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::Serialize;

use super::graph::{self, SmallGraph};
use super::{
    count_invariant_stable_sets, count_stable_sets, enumerate_invariant_stable_sets, Budget,
    JohnsonError, JohnsonGraph, JohnsonParams, StableSet,
};
use crate::permgroup::Permutation;
use crate::subset::{extract_bits, full_mask, k_subsets, SubsetMask};

fn check_pair(params: JohnsonParams, e: usize, f: usize) -> Result<(), JohnsonError> {
    if e == f || e == 0 || f == 0 || e > params.n || f > params.n {
        return Err(JohnsonError::Precondition(format!(
            "({e} {f}) is not a transposition of [{}]",
            params.n
        )));
    }
    Ok(())
}

/// The four vertex classes, each in increasing mask order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranspositionPartition {
    pub e: usize,
    pub f: usize,
    pub v_empty: Vec<SubsetMask>,
    pub v_e: Vec<SubsetMask>,
    pub v_f: Vec<SubsetMask>,
    pub v_ef: Vec<SubsetMask>,
}

impl TranspositionPartition {
    /// `V_e ∪ V_f` in increasing mask order.
    pub fn mixed(&self) -> Vec<SubsetMask> {
        let mut all: Vec<SubsetMask> = self.v_e.iter().chain(&self.v_f).copied().collect();
        all.sort_unstable();
        all
    }
}

pub fn transposition_partition(
    params: JohnsonParams,
    e: usize,
    f: usize,
    budget: Budget,
) -> Result<TranspositionPartition, JohnsonError> {
    check_pair(params, e, f)?;
    let g = JohnsonGraph::new(params, budget)?;
    let mut part = TranspositionPartition {
        e,
        f,
        v_empty: Vec::new(),
        v_e: Vec::new(),
        v_f: Vec::new(),
        v_ef: Vec::new(),
    };
    for i in 0..g.order() {
        let x = g.subset(i);
        match (x.contains(e), x.contains(f)) {
            (false, false) => part.v_empty.push(x),
            (true, false) => part.v_e.push(x),
            (false, true) => part.v_f.push(x),
            (true, true) => part.v_ef.push(x),
        }
    }
    Ok(part)
}

/// `J(m, s) □ K₂`: vertex `side * C(m, s) + i` is the `i`-th `s`-subset on
/// side `side`.
pub fn box_product_graph(m: usize, s: isize, budget: Budget) -> Result<SmallGraph, JohnsonError> {
    let half = JohnsonParams::new(m, s).vertex_count();
    if 2 * half > budget.max_vertices() as u128 {
        return Err(JohnsonError::BudgetExceeded {
            n: m,
            r: s,
            vertices: 2 * half,
            limit: budget.max_vertices(),
        });
    }
    let verts = k_subsets(m, s);
    let h = verts.len();
    Ok(SmallGraph::from_fn(2 * h, |a, b| {
        let (sa, ia) = (a / h, a % h);
        let (sb, ib) = (b / h, b % h);
        if sa == sb {
            (verts[ia] ^ verts[ib]).count_ones() == 2
        } else {
            ia == ib
        }
    }))
}

/// Verifies that `X ↦ (X \ {e, f}, [f ∈ X])` is a graph isomorphism from
/// `J(n, r)[V_e ∪ V_f]` onto `J(n-2, r-1) □ K₂`, checking every vertex pair
/// in both directions.
pub fn check_box_product_iso(
    params: JohnsonParams,
    e: usize,
    f: usize,
    budget: Budget,
) -> Result<bool, JohnsonError> {
    check_pair(params, e, f)?;
    if params.r < 1 || params.r as usize >= params.n {
        return Err(JohnsonError::Precondition(format!(
            "box product needs 1 <= r <= n-1, got {params}"
        )));
    }
    let part = transposition_partition(params, e, f, budget)?;
    let mixed = part.mixed();
    let (m, s) = (params.n - 2, params.r - 1);
    let target = box_product_graph(m, s, budget)?;
    let small = JohnsonGraph::new(JohnsonParams::new(m, s), budget)?;
    let h = small.order();
    let keep = full_mask(params.n) & !(1 << (e - 1)) & !(1 << (f - 1));
    let image: Vec<usize> = mixed
        .iter()
        .map(|x| {
            let side = usize::from(x.contains(f));
            let i = small
                .index_of(extract_bits(x.bits(), keep))
                .expect("squeezed set has r-1 elements");
            side * h + i
        })
        .collect();
    let mut hit = vec![false; target.order()];
    for &v in &image {
        if std::mem::replace(&mut hit[v], true) {
            return Ok(false);
        }
    }
    if hit.iter().any(|&h| !h) {
        return Ok(false);
    }
    for a in 0..mixed.len() {
        for b in a + 1..mixed.len() {
            let here = mixed[a].symmetric_difference(mixed[b]).len() == 2;
            if here != target.has_edge(image[a], image[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An exact comparison between two integer counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub ok: bool,
}

/// `(e f)`-invariant stable sets against `i(J(n-2, r-2)) · i(J(n-2, r))`;
/// `ok` means equality.
pub fn check_product_identity(
    params: JohnsonParams,
    e: usize,
    f: usize,
    budget: Budget,
) -> Result<CountCheck, JohnsonError> {
    check_pair(params, e, f)?;
    let p = Permutation::transposition(params.n, e, f)?;
    let lhs = BigUint::from(count_invariant_stable_sets(params, &p, budget)?);
    let below = count_stable_sets(JohnsonParams::new(params.n - 2, params.r - 2), budget)?;
    let level = count_stable_sets(JohnsonParams::new(params.n - 2, params.r), budget)?;
    let rhs = BigUint::from(below) * BigUint::from(level);
    let ok = lhs == rhs;
    Ok(CountCheck { lhs, rhs, ok })
}

/// `indinv · i_k(J(n-2, r-1) □ K₂) ≤ (r(n-r))^k · i(J(n, r))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KBoundReport {
    pub k: usize,
    pub invariant_count: u128,
    pub box_count: u128,
    pub total_count: u128,
    pub check: CountCheck,
    /// `i_k` of the box product is zero, so the bound says nothing.
    pub vacuous: bool,
}

pub fn check_kbound(
    params: JohnsonParams,
    e: usize,
    f: usize,
    k: usize,
    budget: Budget,
) -> Result<KBoundReport, JohnsonError> {
    check_pair(params, e, f)?;
    let p = Permutation::transposition(params.n, e, f)?;
    let invariant_count = count_invariant_stable_sets(params, &p, budget)?;
    let box_poly =
        graph::independence_polynomial(&box_product_graph(params.n - 2, params.r - 1, budget)?);
    let box_count = box_poly.get(k).copied().unwrap_or(0);
    let total_count = count_stable_sets(params, budget)?;
    let lhs = BigUint::from(invariant_count) * BigUint::from(box_count);
    let rhs = BigUint::from(params.degree()).pow(k as u32) * BigUint::from(total_count);
    let ok = lhs <= rhs;
    Ok(KBoundReport {
        k,
        invariant_count,
        box_count,
        total_count,
        check: CountCheck { lhs, rhs, ok },
        vacuous: box_count == 0,
    })
}

/// `F(I, A) = (I ∪ A) \ N(A)` for an `(e f)`-invariant stable `I` and a
/// stable `A ⊆ V_e ∪ V_f`.
pub fn filter_map_f(
    i: &StableSet,
    a: &StableSet,
    e: usize,
    f: usize,
) -> Result<StableSet, JohnsonError> {
    let params = i.params();
    check_pair(params, e, f)?;
    if a.params() != params {
        return Err(JohnsonError::Precondition(format!(
            "I lives in {params} but A lives in {}",
            a.params()
        )));
    }
    if let Some(x) = i.members().iter().find(|x| x.contains(e) != x.contains(f)) {
        return Err(JohnsonError::Precondition(format!(
            "I is not ({e} {f})-invariant: {x} meets {{{e},{f}}} once"
        )));
    }
    if let Some(x) = a.members().iter().find(|x| x.contains(e) == x.contains(f)) {
        return Err(JohnsonError::Precondition(format!(
            "A must lie in V_e ∪ V_f, but {x} does not"
        )));
    }
    let kept = i.members().iter().filter(|x| {
        !a.members()
            .iter()
            .any(|y| x.symmetric_difference(*y).len() == 2)
    });
    StableSet::new(params, kept.chain(a.members()).copied().collect())
}

/// Result of grouping every `(I, A)` pair with `|A| = k` by `F(I, A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub k: usize,
    pub pairs: u128,
    pub images: usize,
    pub max_fiber: u128,
    pub bound: BigUint,
    /// Each `X ∈ V_e ∪ V_f` has `n-r-1` neighbours in `V_∅` and `r-1` in
    /// `V_ef`, each set a clique.
    pub neighbourhoods_ok: bool,
    /// `A` is recovered from every image as its part in `V_e ∪ V_f`.
    pub recoverable: bool,
    pub ok: bool,
}

pub fn check_fiber_bound(
    params: JohnsonParams,
    e: usize,
    f: usize,
    k: usize,
    budget: Budget,
) -> Result<FiberReport, JohnsonError> {
    check_pair(params, e, f)?;
    let part = transposition_partition(params, e, f, budget)?;
    let p = Permutation::transposition(params.n, e, f)?;
    let invariant = enumerate_invariant_stable_sets(params, &p, budget)?.sets;

    let clique = |xs: &[SubsetMask]| {
        xs.iter().enumerate().all(|(i, a)| {
            xs[i + 1..]
                .iter()
                .all(|b| a.symmetric_difference(*b).len() == 2)
        })
    };
    let r = params.r.max(0) as usize;
    let neighbourhoods_ok = part.mixed().iter().all(|x| {
        let near = |class: &[SubsetMask]| -> Vec<SubsetMask> {
            class
                .iter()
                .filter(|y| x.symmetric_difference(**y).len() == 2)
                .copied()
                .collect()
        };
        let a = near(&part.v_empty);
        let b = near(&part.v_ef);
        a.len() + r + 1 == params.n && b.len() + 1 == r && clique(&a) && clique(&b)
    });

    // stable k-subsets of V_e ∪ V_f
    let mixed = part.mixed();
    let mixed_graph = SmallGraph::from_fn(mixed.len(), |a, b| {
        mixed[a].symmetric_difference(mixed[b]).len() == 2
    });
    let mut choices = Vec::new();
    graph::for_each_stable_set(&mixed_graph, |s| {
        if s.len() == k {
            let members = s.iter().map(|&v| mixed[v]).collect();
            choices.push(StableSet::new(params, members).expect("stable in the induced graph"));
        }
    });

    let mut fibers: BTreeMap<StableSet, u128> = BTreeMap::new();
    let mut recoverable = true;
    for i in &invariant {
        for a in &choices {
            let t = filter_map_f(i, a, e, f)?;
            let back: Vec<SubsetMask> = t
                .members()
                .iter()
                .filter(|x| x.contains(e) != x.contains(f))
                .copied()
                .collect();
            recoverable &= back == a.members();
            *fibers.entry(t).or_default() += 1;
        }
    }
    let pairs = (invariant.len() * choices.len()) as u128;
    let max_fiber = fibers.values().copied().max().unwrap_or(0);
    let bound = BigUint::from(params.degree()).pow(k as u32);
    let ok = neighbourhoods_ok && recoverable && BigUint::from(max_fiber) <= bound;
    Ok(FiberReport {
        k,
        pairs,
        images: fibers.len(),
        max_fiber,
        bound,
        neighbourhoods_ok,
        recoverable,
        ok,
    })
}
