//! π-invariant stable sets, the fixed/moved split, orbit closure and the
//! block decomposition of `Fix(π)`.
//!
//! A π-invariant stable set is a union of vertex orbits. An orbit can take
//! part only if it has no internal edge, and two orbits can take part
//! together only if no edge joins them, so invariant stable sets of `J(n, r)`
//! are exactly the stable sets of the graph on admissible orbits.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::graph::{self, SmallGraph};
use super::{Budget, JohnsonError, JohnsonGraph, JohnsonParams, StableSet};
use crate::permgroup::{PermError, Permutation};
use crate::subset::SubsetMask;

fn check_ground(params: JohnsonParams, p: &Permutation) -> Result<(), JohnsonError> {
    if p.n() != params.n {
        return Err(PermError::Mismatch(params.n, p.n()).into());
    }
    Ok(())
}

/// Orbits of vertices under `p` whose members are pairwise non-adjacent,
/// together with the graph joining orbits that share an edge.
struct OrbitGraph {
    orbits: Vec<Vec<usize>>,
    graph: SmallGraph,
}

fn orbit_graph(g: &JohnsonGraph, p: &Permutation) -> OrbitGraph {
    let order = g.order();
    let mut seen = vec![false; order];
    let mut orbits = Vec::new();
    for start in 0..order {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            orbit.push(v);
            v = g
                .index_of(p.apply_bits(g.vertex(v)))
                .expect("permutations preserve cardinality");
        }
        orbit.sort_unstable();
        if g.graph().is_stable(&orbit) {
            orbits.push(orbit);
        }
    }
    let sets: Vec<super::VertexSet> = orbits.iter().map(|o| o.iter().copied().collect()).collect();
    let graph = SmallGraph::from_fn(orbits.len(), |a, b| {
        orbits[a]
            .iter()
            .any(|&v| g.graph().neighbours(v).intersects(&sets[b]))
    });
    OrbitGraph { orbits, graph }
}

/// Every π-invariant stable set together with their count.
#[derive(Clone, Debug)]
pub struct InvariantEnumeration {
    /// Sorted lexicographically by member list.
    pub sets: Vec<StableSet>,
    pub count: u128,
}

/// Number of stable sets `I` of `J(n, r)` with `p(I) = I`.
pub fn count_invariant_stable_sets(
    params: JohnsonParams,
    p: &Permutation,
    budget: Budget,
) -> Result<u128, JohnsonError> {
    check_ground(params, p)?;
    if !params.in_range() {
        return Ok(1);
    }
    let g = JohnsonGraph::new(params, budget)?;
    let og = orbit_graph(&g, p);
    Ok(graph::count_stable_sets(&og.graph))
}

/// All stable sets `I` of `J(n, r)` with `p(I) = I`.
pub fn enumerate_invariant_stable_sets(
    params: JohnsonParams,
    p: &Permutation,
    budget: Budget,
) -> Result<InvariantEnumeration, JohnsonError> {
    check_ground(params, p)?;
    if !params.in_range() {
        return Ok(InvariantEnumeration {
            sets: vec![StableSet::empty(params)],
            count: 1,
        });
    }
    let g = JohnsonGraph::new(params, budget)?;
    let og = orbit_graph(&g, p);
    let mut sets = Vec::new();
    graph::for_each_stable_set(&og.graph, |chosen| {
        let vertices: Vec<usize> = chosen
            .iter()
            .flat_map(|&o| og.orbits[o].iter().copied())
            .collect();
        sets.push(g.stable_set(&vertices));
    });
    sets.sort_unstable_by(|a, b| a.members().cmp(b.members()));
    let count = sets.len() as u128;
    Ok(InvariantEnumeration { sets, count })
}

/// `I = I⁰ ∪ I⁺` with `I⁰ = I ∩ Fix(π)`; `λ` counts the orbits in `I⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSplit {
    pub whole: StableSet,
    pub fixed_part: StableSet,
    pub moved_part: StableSet,
    pub large_orbit_count: usize,
}

fn is_invariant(members: &[SubsetMask], p: &Permutation) -> bool {
    members.iter().all(|x| {
        members
            .binary_search(&p.apply_to_set(*x).expect("same ground"))
            .is_ok()
    })
}

pub fn split_invariant(i: &StableSet, p: &Permutation) -> Result<InvariantSplit, JohnsonError> {
    let params = i.params();
    check_ground(params, p)?;
    if !is_invariant(i.members(), p) {
        return Err(JohnsonError::NotInvariant(p.to_string()));
    }
    let (fixed, moved): (Vec<SubsetMask>, Vec<SubsetMask>) = i
        .members()
        .iter()
        .partition(|x| p.apply_bits(x.bits()) == x.bits());
    // every member of I⁺ lies in exactly one orbit; count each orbit at its
    // smallest member
    let large_orbit_count = moved
        .iter()
        .filter(|x| {
            p.orbit_of_set(**x)
                .expect("same ground")
                .iter()
                .all(|y| y >= *x)
        })
        .count();
    Ok(InvariantSplit {
        whole: i.clone(),
        fixed_part: StableSet::new(params, fixed)?,
        moved_part: StableSet::new(params, moved)?,
        large_orbit_count,
    })
}

/// Closes `seed` under `p`; fails if the result is not stable.
pub fn orbit_closure(seed: &StableSet, p: &Permutation) -> Result<StableSet, JohnsonError> {
    let params = seed.params();
    check_ground(params, p)?;
    let mut members: Vec<SubsetMask> = Vec::new();
    for x in seed.members() {
        members.extend(p.orbit_of_set(*x)?);
    }
    members.sort_unstable();
    members.dedup();
    for (k, a) in members.iter().enumerate() {
        for b in &members[k + 1..] {
            if a.symmetric_difference(*b).len() == 2 {
                return Err(JohnsonError::ClosureNotStable {
                    perm: p.to_string(),
                    a: *a,
                    b: *b,
                });
            }
        }
    }
    StableSet::new(params, members)
}

/// Parameters of the Johnson graph isomorphic to the block `P_J`: the fixed
/// `r`-sets meeting the support in exactly the cycles listed in `cycles`
/// (1-based cycle indices in canonical order).
pub fn pblock_params(
    params: JohnsonParams,
    p: &Permutation,
    cycles: &[usize],
) -> Result<JohnsonParams, JohnsonError> {
    check_ground(params, p)?;
    let dec = p.cycle_decomposition();
    let mut used = 0u64;
    let mut taken = 0isize;
    for &j in cycles {
        if j == 0 || j > dec.cycle_count() || used >> (j - 1) & 1 == 1 {
            return Err(JohnsonError::Precondition(format!(
                "cycle index {j} is not a fresh index in 1..={}",
                dec.cycle_count()
            )));
        }
        used |= 1 << (j - 1);
        taken += dec.cycles[j - 1].len() as isize;
    }
    Ok(JohnsonParams::new(params.n - dec.moved(), params.r - taken))
}

/// Stable sets inside `Fix(π)` against the product of the block counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PBlockReport {
    pub lhs: u128,
    pub rhs: BigUint,
    pub ok: bool,
}

pub fn check_pblock_bound(
    params: JohnsonParams,
    p: &Permutation,
    budget: Budget,
) -> Result<PBlockReport, JohnsonError> {
    check_ground(params, p)?;
    if p.is_identity() {
        return Err(JohnsonError::Precondition(
            "the permutation must move at least one element".into(),
        ));
    }
    let lhs = if params.in_range() {
        let g = JohnsonGraph::new(params, budget)?;
        let fixed: Vec<usize> = p
            .fixed_r_sets(params.r as usize)
            .iter()
            .map(|x| g.index_of(x.bits()).expect("fixed sets are vertices"))
            .collect();
        graph::count_stable_sets(&g.graph().induced(&fixed))
    } else {
        1
    };
    let m = p.cycle_decomposition().cycle_count();
    let mut rhs = BigUint::one();
    for chosen in 0u64..1 << m {
        let cycles: Vec<usize> = crate::subset::BitIter(chosen).map(|j| j + 1).collect();
        let block = pblock_params(params, p, &cycles)?;
        rhs *= super::count_stable_sets(block, budget)?;
    }
    let ok = BigUint::from(lhs) <= rhs;
    Ok(PBlockReport { lhs, rhs, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::johnson::stable_sets;

    fn set(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn perm(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    /// Filters every stable set by invariance.
    fn filtered(params: JohnsonParams, p: &Permutation) -> Vec<StableSet> {
        stable_sets(params, Budget::default())
            .unwrap()
            .into_iter()
            .filter(|s| is_invariant(s.members(), p))
            .collect()
    }

    #[test]
    fn invariant_examples() {
        let b = Budget::default();
        let params = JohnsonParams::new(4, 2);
        let got = enumerate_invariant_stable_sets(params, &perm(4, "(1 2)"), b).unwrap();
        let text: Vec<String> = got.sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(text, vec!["", "{1,2}", "{1,2},{3,4}", "{3,4}"]);
        assert_eq!(
            count_invariant_stable_sets(params, &Permutation::identity(4), b).unwrap(),
            10
        );
        assert_eq!(
            count_invariant_stable_sets(JohnsonParams::new(3, 1), &perm(3, "(1 2 3)"), b).unwrap(),
            1
        );
    }

    #[test]
    fn orbit_graph_matches_filter_exhaustively() {
        let b = Budget::default();
        for n in 1..=5 {
            for r in 0..=n as isize {
                let params = JohnsonParams::new(n, r);
                for p in Permutation::all(n) {
                    let got = enumerate_invariant_stable_sets(params, &p, b).unwrap();
                    let mut want = filtered(params, &p);
                    want.sort_unstable_by(|a, c| a.members().cmp(c.members()));
                    assert_eq!(got.sets, want, "{params} {p}");
                    assert_eq!(
                        count_invariant_stable_sets(params, &p, b).unwrap(),
                        got.count
                    );
                }
            }
        }
    }

    #[test]
    fn transposition_invariant_sets_avoid_mixed_vertices() {
        let b = Budget::default();
        for n in 2..=7 {
            for r in 0..=n as isize {
                let params = JohnsonParams::new(n, r);
                for e in 1..=n {
                    for f in e + 1..=n {
                        let p = Permutation::transposition(n, e, f).unwrap();
                        for s in enumerate_invariant_stable_sets(params, &p, b).unwrap().sets {
                            for x in s.members() {
                                assert_eq!(x.contains(e), x.contains(f));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn split_examples() {
        let params = JohnsonParams::new(4, 2);
        let i = StableSet::new(params, vec![set(4, &[1, 2]), set(4, &[3, 4])]).unwrap();
        let s = split_invariant(&i, &perm(4, "(1 2)")).unwrap();
        assert_eq!(s.fixed_part, i);
        assert!(s.moved_part.is_empty());
        assert_eq!(s.large_orbit_count, 0);

        let empty = StableSet::empty(params);
        let s = split_invariant(&empty, &perm(4, "(1 2 3)")).unwrap();
        assert!(s.fixed_part.is_empty() && s.moved_part.is_empty());
        assert_eq!(s.large_orbit_count, 0);

        let lone = StableSet::new(params, vec![set(4, &[1, 3])]).unwrap();
        assert!(matches!(
            split_invariant(&lone, &perm(4, "(1 2)")),
            Err(JohnsonError::NotInvariant(_))
        ));
    }

    #[test]
    fn split_with_large_orbit() {
        // (1 2)(3 4) moves {1,3} to {2,4}; the pair is stable
        let params = JohnsonParams::new(4, 2);
        let p = perm(4, "(1 2)(3 4)");
        let i = StableSet::new(params, vec![set(4, &[1, 3]), set(4, &[2, 4])]).unwrap();
        let s = split_invariant(&i, &p).unwrap();
        assert!(s.fixed_part.is_empty());
        assert_eq!(s.moved_part, i);
        assert_eq!(s.large_orbit_count, 1);
    }

    #[test]
    fn split_invariants_exhaustive() {
        let b = Budget::default();
        for n in 2..=5 {
            for r in 1..n as isize {
                let params = JohnsonParams::new(n, r);
                for p in Permutation::all(n) {
                    for i in enumerate_invariant_stable_sets(params, &p, b).unwrap().sets {
                        let s = split_invariant(&i, &p).unwrap();
                        assert_eq!(s.fixed_part.len() + s.moved_part.len(), i.len());
                        let orbit_sizes: usize = s
                            .moved_part
                            .members()
                            .iter()
                            .map(|x| 1.0 / p.orbit_of_set(*x).unwrap().len() as f64)
                            .sum::<f64>()
                            .round() as usize;
                        assert_eq!(orbit_sizes, s.large_orbit_count);
                        // one representative per orbit closes back to I⁺
                        let reps: Vec<SubsetMask> = s
                            .moved_part
                            .members()
                            .iter()
                            .filter(|x| p.orbit_of_set(**x).unwrap().iter().all(|y| y >= *x))
                            .copied()
                            .collect();
                        let seed = StableSet::new(params, reps).unwrap();
                        assert_eq!(orbit_closure(&seed, &p).unwrap(), s.moved_part);
                    }
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let params = JohnsonParams::new(4, 2);
        let p = perm(4, "(2 3)");
        assert!(orbit_closure(&StableSet::empty(params), &p)
            .unwrap()
            .is_empty());
        let seed = StableSet::new(params, vec![set(4, &[1, 2])]).unwrap();
        assert!(matches!(
            orbit_closure(&seed, &p),
            Err(JohnsonError::ClosureNotStable { .. })
        ));
    }

    #[test]
    fn pblock_examples() {
        let p = perm(4, "(1 2)");
        let params = JohnsonParams::new(4, 2);
        assert_eq!(
            pblock_params(params, &p, &[]).unwrap(),
            JohnsonParams::new(2, 2)
        );
        assert_eq!(
            pblock_params(params, &p, &[1]).unwrap(),
            JohnsonParams::new(2, 0)
        );
        let q = perm(6, "(1 2 3)(4 5)");
        assert_eq!(
            pblock_params(JohnsonParams::new(6, 3), &q, &[1]).unwrap(),
            JohnsonParams::new(1, 0)
        );
        assert!(pblock_params(params, &p, &[2]).is_err());

        let b = Budget::default();
        let rep = check_pblock_bound(params, &p, b).unwrap();
        assert_eq!(
            (rep.lhs, rep.rhs.clone(), rep.ok),
            (4, BigUint::from(4u8), true)
        );
        let rep = check_pblock_bound(JohnsonParams::new(3, 1), &perm(3, "(1 2 3)"), b).unwrap();
        assert_eq!(rep.lhs, 1);
        assert!(rep.ok);
        assert!(check_pblock_bound(params, &Permutation::identity(4), b).is_err());
    }

    /// Brute-force `i^S`: stable sets of `J(n, r)` all of whose members are
    /// fixed.
    fn brute_fixed_count(params: JohnsonParams, p: &Permutation) -> u128 {
        stable_sets(params, Budget::default())
            .unwrap()
            .iter()
            .filter(|s| {
                s.members()
                    .iter()
                    .all(|x| p.apply_bits(x.bits()) == x.bits())
            })
            .count() as u128
    }

    #[test]
    fn pblock_lhs_matches_brute_force() {
        let b = Budget::default();
        for n in 1..=5 {
            for r in 0..=n as isize {
                let params = JohnsonParams::new(n, r);
                for p in Permutation::all(n).filter(|p| !p.is_identity()) {
                    let rep = check_pblock_bound(params, &p, b).unwrap();
                    assert_eq!(rep.lhs, brute_fixed_count(params, &p));
                    assert!(rep.ok);
                }
            }
        }
    }
}
