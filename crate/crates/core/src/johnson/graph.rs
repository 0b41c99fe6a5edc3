//! Bitset graphs with at most [`VERTEX_CAPACITY`] vertices and the two
//! stable-set engines used everywhere else:
//!
//! * [`independence_polynomial`] counts stable sets by size with the
//!   recursion `P(G) = P(G - v) + x P(G - N[v])`, branching on a vertex of
//!   maximum degree and closing edgeless remainders with a binomial row.
//! * [`for_each_stable_set`] / [`par_fold_stable_sets`] list every stable
//!   set in canonical order (lexicographic in vertex index).
//!
//! The two never share code beyond the adjacency rows, so one serves as a
//! check on the other.

use rayon::prelude::*;

/// Hard ceiling on vertices per graph.
pub const VERTEX_CAPACITY: usize = 256;
const WORDS: usize = VERTEX_CAPACITY / 64;

/// A set of vertex indices below [`VERTEX_CAPACITY`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct VertexSet([u64; WORDS]);

impl VertexSet {
    pub const EMPTY: Self = Self([0; WORDS]);

    /// `{0, 1, ..., len - 1}`.
    pub fn prefix(len: usize) -> Self {
        debug_assert!(len <= VERTEX_CAPACITY);
        let mut s = Self::EMPTY;
        for (w, word) in s.0.iter_mut().enumerate() {
            let lo = w * 64;
            if len >= lo + 64 {
                *word = u64::MAX;
            } else if len > lo {
                *word = (1u64 << (len - lo)) - 1;
            }
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= b;
        }
        out
    }

    #[inline]
    pub fn and_not(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= !b;
        }
        out
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0).any(|(a, b)| a & b != 0)
    }

    /// Elements strictly greater than `v`.
    #[inline]
    pub fn above(&self, v: usize) -> Self {
        let mut out = *self;
        let w = v >> 6;
        for word in out.0.iter_mut().take(w) {
            *word = 0;
        }
        let shift = (v & 63) + 1;
        out.0[w] &= if shift == 64 { 0 } else { u64::MAX << shift };
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| crate::subset::BitIter(word).map(move |b| w * 64 + b))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Simple undirected graph stored as adjacency bitsets.
#[derive(Clone, Debug)]
pub struct SmallGraph {
    adj: Vec<VertexSet>,
}

impl SmallGraph {
    /// Builds a graph on `order` vertices from a symmetric predicate.
    pub fn from_fn(order: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(
            order <= VERTEX_CAPACITY,
            "graph order {order} exceeds capacity"
        );
        let mut adj = vec![VertexSet::EMPTY; order];
        for u in 0..order {
            for v in u + 1..order {
                if edge(u, v) {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Self { adj }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::prefix(self.order())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Subgraph induced on `keep`, relabelled in increasing index order.
    pub fn induced(&self, keep: &[usize]) -> SmallGraph {
        SmallGraph::from_fn(keep.len(), |a, b| self.has_edge(keep[a], keep[b]))
    }

    pub fn is_stable(&self, vertices: &[usize]) -> bool {
        let set: VertexSet = vertices.iter().copied().collect();
        vertices.iter().all(|&v| !self.adj[v].intersects(&set))
    }
}

/// Coefficients of the independence polynomial: entry `k` is the number of
/// stable sets of size `k`.
pub fn independence_polynomial(g: &SmallGraph) -> Vec<u128> {
    independence_polynomial_on(g, g.all())
}

/// Same, restricted to the subgraph induced by `within`.
pub fn independence_polynomial_on(g: &SmallGraph, within: VertexSet) -> Vec<u128> {
    let mut poly = poly_rec(g, within, 0);
    while poly.len() > 1 && poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Total stable-set count, `∅` included.
pub fn count_stable_sets(g: &SmallGraph) -> u128 {
    independence_polynomial(g).iter().sum()
}

const PAR_DEPTH: usize = 6;

fn poly_rec(g: &SmallGraph, p: VertexSet, depth: usize) -> Vec<u128> {
    let size = p.len();
    if size == 0 {
        return vec![1];
    }
    let mut best = usize::MAX;
    let mut best_deg = 0;
    for v in p.iter() {
        let d = g.adj[v].and(&p).len();
        if best == usize::MAX || d > best_deg {
            best = v;
            best_deg = d;
        }
    }
    if best_deg == 0 {
        return binomial_row(size);
    }
    let mut without = p;
    without.remove(best);
    let mut closed = g.adj[best];
    closed.insert(best);
    let with = p.and_not(&closed);
    let (a, b) = if depth < PAR_DEPTH && size > 24 {
        rayon::join(
            || poly_rec(g, without, depth + 1),
            || poly_rec(g, with, depth + 1),
        )
    } else {
        (
            poly_rec(g, without, depth + 1),
            poly_rec(g, with, depth + 1),
        )
    };
    let mut out = a;
    if out.len() < b.len() + 1 {
        out.resize(b.len() + 1, 0);
    }
    for (k, c) in b.into_iter().enumerate() {
        out[k + 1] += c;
    }
    out
}

fn binomial_row(m: usize) -> Vec<u128> {
    let mut row = vec![1u128; m + 1];
    for k in 1..m {
        row[k] = row[k - 1] * (m - k + 1) as u128 / k as u128;
    }
    row
}

/// Calls `visit` once per stable set (vertex indices ascending), in
/// lexicographic order. `∅` comes first.
pub fn for_each_stable_set(g: &SmallGraph, mut visit: impl FnMut(&[usize])) {
    let mut chosen = Vec::new();
    dfs(g, g.all(), &mut chosen, &mut visit);
}

fn dfs(g: &SmallGraph, cand: VertexSet, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    visit(chosen);
    for v in cand.iter() {
        chosen.push(v);
        dfs(g, cand.above(v).and_not(&g.adj[v]), chosen, visit);
        chosen.pop();
    }
}

/// Parallel fold over every stable set.
///
/// The search tree is cut at a fixed depth; each subtree is folded on its
/// own accumulator and the partial results are merged in canonical subtree
/// order, so `merge` sees the same sequence on any thread count.
pub fn par_fold_stable_sets<T, I, F, M>(g: &SmallGraph, init: I, fold: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[usize]) + Sync,
    M: Fn(T, T) -> T,
{
    const SPLIT_DEPTH: usize = 2;
    // Collect the frontier: (prefix, candidates) pairs at SPLIT_DEPTH plus
    // the shallower prefixes, which are visited inline.
    let mut head = init();
    let mut frontier: Vec<(Vec<usize>, VertexSet)> = Vec::new();
    let mut stack = vec![(Vec::new(), g.all())];
    // depth-first expansion keeps canonical order in `frontier`
    while let Some((prefix, cand)) = stack.pop() {
        if prefix.len() == SPLIT_DEPTH {
            frontier.push((prefix, cand));
            continue;
        }
        fold(&mut head, &prefix);
        let children: Vec<_> = cand
            .iter()
            .map(|v| {
                let mut p = prefix.clone();
                p.push(v);
                (p, cand.above(v).and_not(&g.adj[v]))
            })
            .collect();
        stack.extend(children.into_iter().rev());
    }
    let parts: Vec<T> = frontier
        .into_par_iter()
        .map(|(prefix, cand)| {
            let mut acc = init();
            let mut chosen = prefix;
            dfs(g, cand, &mut chosen, &mut |s: &[usize]| fold(&mut acc, s));
            acc
        })
        .collect();
    parts.into_iter().fold(head, merge)
}
