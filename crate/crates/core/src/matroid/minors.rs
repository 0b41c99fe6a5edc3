//! Deleting and contracting a pair `{e, f}`, and rebuilding a matroid with
//! the automorphism `(e f)` from those two minors.
//!
//! Minors live on `[n-2]`: the elements of `[n] \ {e, f}` keep their order
//! and close up the gaps.

use super::{Matroid, MatroidError};
use crate::subset::{deposit_bits, extract_bits, full_mask, k_subsets};

fn check_pair(n: usize, e: usize, f: usize) -> Result<u64, MatroidError> {
    if e == f || e == 0 || f == 0 || e > n || f > n {
        return Err(MatroidError::BadPair { n, e, f });
    }
    Ok(full_mask(n) & !(1 << (e - 1)) & !(1 << (f - 1)))
}

/// Relabels sets avoiding `{e, f}` onto `[n-2]` and builds the matroid.
fn squeezed(n: usize, rank: usize, keep: u64, bases: impl Iterator<Item = u64>) -> Matroid {
    let mut b: Vec<u64> = bases.map(|x| extract_bits(x, keep)).collect();
    b.sort_unstable();
    b.dedup();
    let nonbases = k_subsets(n - 2, rank as isize)
        .into_iter()
        .filter(|x| b.binary_search(x).is_err())
        .collect();
    Matroid::from_sorted_unchecked(n - 2, rank, nonbases)
}

/// `M \ {e, f}`: bases are the largest intersections of bases with
/// `[n] \ {e, f}`.
pub fn delete_pair(m: &Matroid, e: usize, f: usize) -> Result<Matroid, MatroidError> {
    let keep = check_pair(m.n(), e, f)?;
    let rank = m.rank_bits(keep);
    let bases = m.bases();
    Ok(squeezed(
        m.n(),
        rank,
        keep,
        bases
            .into_iter()
            .filter(|b| (b & keep).count_ones() as usize == rank)
            .map(|b| b & keep),
    ))
}

/// `M / {e, f}`: with `ρ = r({e, f})`, bases are `B \ {e, f}` for bases
/// meeting `{e, f}` in `ρ` elements.
pub fn contract_pair(m: &Matroid, e: usize, f: usize) -> Result<Matroid, MatroidError> {
    let keep = check_pair(m.n(), e, f)?;
    let pair = full_mask(m.n()) & !keep;
    let rho = m.rank_bits(pair);
    let rank = m.rank() - rho;
    let bases = m.bases();
    Ok(squeezed(
        m.n(),
        rank,
        keep,
        bases
            .into_iter()
            .filter(|b| (b & pair).count_ones() as usize == rho)
            .map(|b| b & keep),
    ))
}

/// Rebuilds `M` on `[n]` of rank `r` from `M \ ef` and `M / ef`, given that
/// `(e f)` is an automorphism of `M`.
///
/// Bases avoiding `{e, f}` are those of the deletion when it has rank `r`;
/// bases containing both are the contraction's bases plus `{e, f}` when the
/// contraction has rank `r - 2`. Bases meeting `{e, f}` once come in pairs
/// `X`, `X △ {e, f}`; which of them exist is decided by how `{e, f}` sits
/// in `M`:
///
/// - loops (contraction rank `r`) or coloops (deletion rank `r - 2`): none;
/// - parallel (contraction rank `r - 1`): `Y + e` and `Y + f` for `Y` a basis
///   of the contraction;
/// - series (deletion rank `r - 1`): `Y + e` and `Y + f` for `Y` a basis of
///   the deletion;
/// - otherwise, `X ∋ e`, `f ∉ X`, is a non-basis iff `X - e` is dependent
///   (`X - e + g` is a non-basis of the deletion for every `g ∉ X + f`) or
///   `X - e` spans `e` (`X - e - h` is a non-basis of the contraction for
///   every `h ∈ X - e`).
///
/// The result is checked: it must be a matroid, have `(e f)` as an
/// automorphism and reproduce both minors.
pub fn reconstruct_from_minors(
    deletion: &Matroid,
    contraction: &Matroid,
    n: usize,
    r: usize,
    e: usize,
    f: usize,
) -> Result<Matroid, MatroidError> {
    let keep = check_pair(n, e, f)?;
    let promise = |reason: String| MatroidError::PromiseViolation { e, f, reason };
    if deletion.n() + 2 != n || contraction.n() + 2 != n {
        return Err(promise(format!(
            "minors have ground sets of size {} and {}, expected {}",
            deletion.n(),
            contraction.n(),
            n.saturating_sub(2)
        )));
    }
    if r > n {
        return Err(MatroidError::InvalidRank { n, r });
    }
    let (r_del, r_con) = (deletion.rank(), contraction.rank());
    if r_del > r || r_del + 2 < r || r_con > r || r_con + 2 < r {
        return Err(promise(format!(
            "minor ranks {r_del} and {r_con} are incompatible with rank {r}"
        )));
    }
    let (be, bf) = (1u64 << (e - 1), 1u64 << (f - 1));
    let lift = |y: u64| deposit_bits(y, keep);

    let mut bases: Vec<u64> = Vec::new();
    if r_del == r {
        bases.extend(deletion.bases().into_iter().map(lift));
    }
    if r_con + 2 == r {
        bases.extend(contraction.bases().into_iter().map(|y| lift(y) | be | bf));
    }
    let paired = |from: &Matroid| -> Vec<u64> {
        from.bases()
            .into_iter()
            .flat_map(|y| [lift(y) | be, lift(y) | bf])
            .collect()
    };
    let loops = r_con == r;
    let coloops = r_del + 2 == r;
    if loops || coloops {
        // no basis meets {e, f} exactly once
    } else if r_con + 1 == r {
        bases.extend(paired(contraction));
    } else if r_del + 1 == r {
        bases.extend(paired(deletion));
    } else {
        // r_del = r and r_con = r - 2; here r >= 2
        for z in k_subsets(n - 2, r as isize - 1) {
            let x = lift(z) | be;
            let dependent = (0..n - 2)
                .filter(|g| z >> g & 1 == 0)
                .all(|g| deletion.is_nonbasis_bits(z | 1 << g));
            let spans = (0..n - 2)
                .filter(|h| z >> h & 1 == 1)
                .all(|h| contraction.is_nonbasis_bits(z & !(1 << h)));
            if !(dependent || spans) {
                bases.push(x);
                bases.push(x ^ be ^ bf);
            }
        }
    }

    let m = Matroid::from_bases(n, r, &bases).map_err(|err| promise(err.to_string()))?;
    let p = crate::permgroup::Permutation::transposition(n, e, f)
        .map_err(|err| promise(err.to_string()))?;
    if !m.is_automorphism_unchecked(&p) {
        return Err(promise(format!(
            "({e} {f}) is not an automorphism of the result"
        )));
    }
    if delete_pair(&m, e, f)? != *deletion || contract_pair(&m, e, f)? != *contraction {
        return Err(promise(
            "the result does not reproduce the given minors".into(),
        ));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::all_matroids_brute_force;
    use crate::permgroup::Permutation;
    use crate::subset::SubsetMask;

    fn set(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn parallel_pair() -> Matroid {
        Matroid::validate(4, 2, &[set(4, &[1, 2])]).unwrap()
    }

    #[test]
    fn minor_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        assert_eq!(
            delete_pair(&u, 1, 2).unwrap(),
            Matroid::uniform(2, 2).unwrap()
        );
        assert_eq!(
            contract_pair(&u, 1, 2).unwrap(),
            Matroid::uniform(2, 0).unwrap()
        );
        // {3,4} is a basis; contracting it leaves rank 0 with 1 and 2 loops
        let c = contract_pair(&parallel_pair(), 3, 4).unwrap();
        assert_eq!((c.n(), c.rank(), c.bases()), (2, 0, vec![0]));
        // {1,2} is a parallel pair: the minors are U_{2,2} and U_{1,2}
        assert_eq!(
            delete_pair(&parallel_pair(), 1, 2).unwrap(),
            Matroid::uniform(2, 2).unwrap()
        );
        assert_eq!(
            contract_pair(&parallel_pair(), 1, 2).unwrap(),
            Matroid::uniform(2, 1).unwrap()
        );
        assert!(delete_pair(&u, 2, 2).is_err());
    }

    #[test]
    fn minors_relabel_in_order() {
        // non-basis {1,3,5} of a rank-3 matroid on [6]; deleting {2,4} maps
        // 1,3,5,6 to 1,2,3,4
        let m = Matroid::validate(6, 3, &[set(6, &[1, 3, 5])]).unwrap();
        let d = delete_pair(&m, 2, 4).unwrap();
        assert_eq!((d.n(), d.rank()), (4, 3));
        assert_eq!(d.nonbasis_bits(), &[0b111]);
    }

    /// Deletion and contraction as defined through the rank function:
    /// `r_{M\T}(S) = r(S)` and `r_{M/T}(S) = r(S ∪ T) - r(T)`.
    #[test]
    fn minors_agree_with_rank_definitions() {
        for n in 2..=5 {
            for r in 0..=n {
                for m in all_matroids_brute_force(n, r) {
                    for e in 1..=n {
                        for f in e + 1..=n {
                            let keep = full_mask(n) & !(1 << (e - 1)) & !(1 << (f - 1));
                            let pair = full_mask(n) & !keep;
                            let d = delete_pair(&m, e, f).unwrap();
                            let c = contract_pair(&m, e, f).unwrap();
                            for s in 0..1u64 << (n - 2) {
                                let lifted = deposit_bits(s, keep);
                                assert_eq!(d.rank_bits(s), m.rank_bits(lifted));
                                assert_eq!(
                                    c.rank_bits(s),
                                    m.rank_bits(lifted | pair) - m.rank_bits(pair)
                                );
                            }
                            Matroid::validate_bits(d.n(), d.rank(), d.nonbasis_bits().to_vec())
                                .unwrap();
                            Matroid::validate_bits(c.n(), c.rank(), c.nonbasis_bits().to_vec())
                                .unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruction_examples() {
        let u = Matroid::uniform(4, 2).unwrap();
        let got = reconstruct_from_minors(
            &delete_pair(&u, 1, 2).unwrap(),
            &contract_pair(&u, 1, 2).unwrap(),
            4,
            2,
            1,
            2,
        )
        .unwrap();
        assert_eq!(got, u);
        let m = parallel_pair();
        let got = reconstruct_from_minors(
            &delete_pair(&m, 1, 2).unwrap(),
            &contract_pair(&m, 1, 2).unwrap(),
            4,
            2,
            1,
            2,
        )
        .unwrap();
        assert_eq!(got, m);
    }

    #[test]
    fn reconstruction_round_trip_up_to_5() {
        for n in 2..=5 {
            for r in 0..=n {
                for m in all_matroids_brute_force(n, r) {
                    for e in 1..=n {
                        for f in e + 1..=n {
                            let p = Permutation::transposition(n, e, f).unwrap();
                            if !m.is_automorphism(&p).unwrap() {
                                continue;
                            }
                            let d = delete_pair(&m, e, f).unwrap();
                            let c = contract_pair(&m, e, f).unwrap();
                            let got = reconstruct_from_minors(&d, &c, n, r, e, f).unwrap();
                            assert_eq!(got, m, "({e} {f})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruction_rejects_broken_promises() {
        // a deletion with no loops next to a contraction with a loop: the
        // assembled matroid has 3 as a loop and cannot reproduce the deletion
        let d = Matroid::uniform(2, 1).unwrap();
        let c = Matroid::validate(2, 1, &[set(2, &[1])]).unwrap();
        let err = reconstruct_from_minors(&d, &c, 4, 2, 1, 2).unwrap_err();
        assert!(
            matches!(err, MatroidError::PromiseViolation { .. }),
            "{err}"
        );
        let err = reconstruct_from_minors(&d, &c, 5, 2, 1, 2).unwrap_err();
        assert!(matches!(err, MatroidError::PromiseViolation { .. }));
        let u = Matroid::uniform(2, 2).unwrap();
        let err = reconstruct_from_minors(&u, &u, 4, 0, 1, 2).unwrap_err();
        assert!(matches!(err, MatroidError::PromiseViolation { .. }));
        assert!(matches!(
            reconstruct_from_minors(&u, &u, 4, 2, 1, 1),
            Err(MatroidError::BadPair { .. })
        ));
    }
}
