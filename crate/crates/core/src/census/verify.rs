//! Finite checks of every lemma-level claim over its full grid.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::{check_budget, full_record, par_fold_matroids, CensusError, CensusKind};
use crate::combinatorics::{
    check_central_bounds, check_compare_bound, deviation_ratio, f_kappa_reciprocal,
};
use crate::johnson::{
    check_box_product_iso, check_fiber_bound, check_kbound, check_pblock_bound,
    check_product_identity, graph, Budget, JohnsonGraph, JohnsonParams, StableSet,
};
use crate::matroid::{
    aut_kind, contract_pair, delete_pair, reconstruct_from_minors, AutBudget, AutKind, Matroid,
};
use crate::permgroup::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LemmaId {
    ProductIdentity,
    KBound,
    PBlocks,
    BoxIso,
    WStable,
    Reconstruct,
    Binomial,
    TUpper,
    FKappa,
}

impl LemmaId {
    pub const ALL: [LemmaId; 9] = [
        Self::ProductIdentity,
        Self::KBound,
        Self::PBlocks,
        Self::BoxIso,
        Self::WStable,
        Self::Reconstruct,
        Self::Binomial,
        Self::TUpper,
        Self::FKappa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ProductIdentity => "product-identity",
            Self::KBound => "kbound",
            Self::PBlocks => "pblocks",
            Self::BoxIso => "box-iso",
            Self::WStable => "w-stable",
            Self::Reconstruct => "reconstruct",
            Self::Binomial => "binomial",
            Self::TUpper => "t-upper",
            Self::FKappa => "f-kappa",
        }
    }

    /// Largest `n` of the default grid.
    pub fn default_max_n(self) -> usize {
        match self {
            Self::ProductIdentity | Self::BoxIso | Self::Reconstruct => 7,
            Self::KBound | Self::PBlocks | Self::WStable | Self::TUpper => 6,
            Self::Binomial => 64,
            Self::FKappa => 0,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| CensusError::Usage(format!("unknown lemma {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub grid: String,
    pub checked: u64,
    pub failures: Vec<String>,
    pub wall_time: Duration,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Text block; `wall_time` is left out when `timing` is false so that
    /// output is reproducible.
    pub fn render(&self, timing: bool) -> String {
        let mut out = format!(
            "lemma_id: {}\ngrid: {}\nchecked: {}\nfailures: {}\n",
            self.lemma_id,
            self.grid,
            self.checked,
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!("  - {f}\n"));
        }
        if timing {
            out.push_str(&format!(
                "wall_time: {:.3}s\n",
                self.wall_time.as_secs_f64()
            ));
        }
        out
    }
}

/// Grid bounds for a single lemma run.
#[derive(Debug, Clone, Default)]
pub struct VerifyScope {
    /// Overrides the lemma's default largest `n`.
    pub max_n: Option<usize>,
    /// The `k` values for the k-bound; default `0, 1, 2`.
    pub ks: Option<Vec<usize>>,
}

struct Tally {
    checked: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |e| (e + 1..=n).map(move |f| (e, f)))
}

pub fn run_lemma(id: LemmaId, scope: &VerifyScope) -> Result<LemmaReport, CensusError> {
    let start = Instant::now();
    let max_n = scope.max_n.unwrap_or(id.default_max_n());
    let ks = scope.ks.clone().unwrap_or_else(|| vec![0, 1, 2]);
    let b = Budget::default();
    let (grid, tally) = match id {
        LemmaId::ProductIdentity => {
            let mut t = Tally::new();
            for n in 2..=max_n {
                for r in 0..=n as isize {
                    for (e, f) in pairs(n) {
                        let c = check_product_identity(JohnsonParams::new(n, r), e, f, b)?;
                        t.check(c.ok, || {
                            format!("J({n},{r}) ({e} {f}): {} != {}", c.lhs, c.rhs)
                        });
                    }
                }
            }
            (
                format!("2 <= n <= {max_n}, 0 <= r <= n, all transpositions"),
                t,
            )
        }
        LemmaId::KBound => {
            let mut t = Tally::new();
            for n in 2..=max_n {
                for r in 0..=n as isize {
                    let params = JohnsonParams::new(n, r);
                    for (e, f) in pairs(n) {
                        for &k in &ks {
                            let rep = check_kbound(params, e, f, k, b)?;
                            t.check(rep.check.ok, || {
                                format!(
                                    "J({n},{r}) ({e} {f}) k={k}: {} > {}",
                                    rep.check.lhs, rep.check.rhs
                                )
                            });
                            if (1..=2).contains(&k) {
                                let fib = check_fiber_bound(params, e, f, k, b)?;
                                t.check(fib.ok, || {
                                    format!("J({n},{r}) ({e} {f}) k={k}: fiber check {fib:?}")
                                });
                            }
                        }
                    }
                }
            }
            let ks_text: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
            (
                format!(
                    "2 <= n <= {max_n}, 0 <= r <= n, all transpositions, k in {{{}}}, F-map fibers for k in {{1,2}}",
                    ks_text.join(",")
                ),
                t,
            )
        }
        LemmaId::PBlocks => {
            let perms: Vec<Permutation> = (1..=max_n)
                .flat_map(|n| Permutation::all(n).filter(|p| !p.is_identity()))
                .collect();
            let t = perms
                .par_iter()
                .map(|p| -> Result<Tally, CensusError> {
                    let mut t = Tally::new();
                    let n = p.n();
                    for r in 0..=n as isize {
                        let rep = check_pblock_bound(JohnsonParams::new(n, r), p, b)?;
                        t.check(rep.ok, || {
                            format!("J({n},{r}) {p}: {} > {}", rep.lhs, rep.rhs)
                        });
                    }
                    Ok(t)
                })
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(Tally::new(), Tally::merge);
            (
                format!("1 <= |Supp| <= n <= {max_n}, 0 <= r <= n, all permutations"),
                t,
            )
        }
        LemmaId::BoxIso => {
            let mut t = Tally::new();
            for n in 2..=max_n {
                for r in 1..n as isize {
                    for (e, f) in pairs(n) {
                        let ok = check_box_product_iso(JohnsonParams::new(n, r), e, f, b)?;
                        t.check(ok, || format!("J({n},{r}) ({e} {f})"));
                    }
                }
            }
            (
                format!("2 <= n <= {max_n}, 1 <= r <= n-1, all transpositions"),
                t,
            )
        }
        LemmaId::WStable => {
            let top = max_n.min(super::FULL_MAX_N);
            check_budget(CensusKind::AllMatroids, max_n)?;
            let mut t = Tally::new();
            for n in 0..=top {
                for r in 0..=n {
                    let part = par_fold_matroids(
                        n,
                        r,
                        Tally::new,
                        |acc, m| {
                            let w = m.uw_split().w_part;
                            let ok = StableSet::new(JohnsonParams::new(n, r as isize), w).is_ok();
                            acc.check(ok, || format!("W(M) not stable for {m:?}"));
                        },
                        Tally::merge,
                    );
                    t = t.merge(part);
                }
            }
            (format!("every matroid with n <= {top}"), t)
        }
        LemmaId::Reconstruct => {
            let full_top = max_n.min(super::FULL_MAX_N);
            check_budget(CensusKind::SparsePaving, max_n)?;
            let mut t = Tally::new();
            for n in 2..=full_top {
                for r in 0..=n {
                    let part = par_fold_matroids(
                        n,
                        r,
                        Tally::new,
                        |acc, m| round_trip(&m, acc),
                        Tally::merge,
                    );
                    t = t.merge(part);
                }
            }
            for n in 2..=max_n {
                for r in 0..=n {
                    t = t.merge(sparse_round_trips(n, r)?);
                }
            }
            (
                format!(
                    "all matroids with n <= {full_top}, sparse paving matroids with n <= {max_n}, every transposition in Aut(M)"
                ),
                t,
            )
        }
        LemmaId::Binomial => {
            let mut t = Tally::new();
            for n in 1..=max_n as u64 {
                let c = check_central_bounds(n)?;
                t.check(c.lower_ok(), || {
                    format!("lower central bound fails at n={n}")
                });
                t.check(c.upper_ok(), || {
                    format!("upper central bound fails at n={n}")
                });
                if n >= 2 {
                    for m in 0..n {
                        let c = check_compare_bound(n, m)?;
                        t.check(c.ok(), || format!("comparison bound fails at n={n}, m={m}"));
                    }
                }
            }
            if max_n >= 64 {
                for k in 0..=4 {
                    let ratio = deviation_ratio(64, k)?;
                    t.check((0.9..=1.1).contains(&ratio), || {
                        format!("deviation ratio {ratio} at n=64, k={k} is off by more than 10%")
                    });
                }
            }
            (
                format!("1 <= n <= {max_n}, 0 <= m < n; deviation ratio at n=64, 0 <= k <= 4"),
                t,
            )
        }
        LemmaId::TUpper => {
            let mut t = Tally::new();
            for n in 2..=max_n {
                t = t.merge(t_upper_tally(n)?);
            }
            (
                format!("2 <= n <= {max_n}, 0 <= r <= n, all transpositions"),
                t,
            )
        }
        LemmaId::FKappa => {
            let mut t = Tally::new();
            let f5 = f_kappa_reciprocal(5)?;
            t.check(f5 < 1.0, || format!("f(1/5) = {f5} is not below 1"));
            let f13 = f_kappa_reciprocal(13)?;
            t.check(f13 < 0.48, || format!("f(1/13) = {f13} is not below 0.48"));
            ("kappa in {1/5, 1/13}, base-2 logarithms".to_string(), t)
        }
    };
    Ok(LemmaReport {
        lemma_id: id,
        grid,
        checked: tally.checked,
        failures: tally.failures,
        wall_time: start.elapsed(),
    })
}

fn round_trip(m: &Matroid, acc: &mut Tally) {
    let n = m.n();
    for (e, f) in pairs(n) {
        let p = Permutation::transposition(n, e, f).expect("valid pair");
        if !m.is_automorphism(&p).expect("same ground") {
            continue;
        }
        let got = delete_pair(m, e, f).and_then(|d| {
            let c = contract_pair(m, e, f)?;
            reconstruct_from_minors(&d, &c, n, m.rank(), e, f)
        });
        acc.check(got.as_ref() == Ok(m), || {
            format!("({e} {f}) on {m:?}: got {got:?}")
        });
    }
}

fn sparse_round_trips(n: usize, r: usize) -> Result<Tally, CensusError> {
    let g = JohnsonGraph::new(JohnsonParams::new(n, r as isize), Budget::default())?;
    let order = g.order();
    Ok(graph::par_fold_stable_sets(
        g.graph(),
        Tally::new,
        |acc, chosen| {
            if chosen.len() == order {
                return;
            }
            let nonbases = chosen.iter().map(|&v| g.vertex(v)).collect();
            round_trip(&Matroid::from_sorted_unchecked(n, r, nonbases), acc);
        },
        Tally::merge,
    ))
}

/// `t(n, r; π) ≤ m(n-2, r-2) · m(n-2, r) + 3` for every rank and every
/// transposition `π`, where `t` counts matroids with `Aut(M) = {id, π}`
/// and `m` is zero outside `0 <= r <= n`.
pub fn t_upper_check(n: usize) -> Result<LemmaReport, CensusError> {
    let start = Instant::now();
    let tally = t_upper_tally(n)?;
    Ok(LemmaReport {
        lemma_id: LemmaId::TUpper,
        grid: format!("n = {n}, 0 <= r <= n, all transpositions"),
        checked: tally.checked,
        failures: tally.failures,
        wall_time: start.elapsed(),
    })
}

fn t_upper_tally(n: usize) -> Result<Tally, CensusError> {
    check_budget(CensusKind::AllMatroids, n)?;
    if n < 2 {
        return Ok(Tally::new());
    }
    let m_below = |r: isize| -> Result<u128, CensusError> {
        if r < 0 || r as usize > n - 2 {
            Ok(0)
        } else {
            Ok(full_record(n - 2, r as usize)?.total)
        }
    };
    let mut t = Tally::new();
    for r in 0..=n {
        let bound = m_below(r as isize - 2)? * m_below(r as isize)? + 3;
        let counts = par_fold_matroids(
            n,
            r,
            || vec![0u128; n * n],
            |acc, m| {
                let c = aut_kind(&m, AutBudget::default()).expect("within budget");
                if c.kind == AutKind::SingleTransposition {
                    let (e, f) = c.generator_pair.expect("reported with the kind");
                    acc[(e - 1) * n + (f - 1)] += 1;
                }
            },
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
        for (e, f) in pairs(n) {
            let count = counts[(e - 1) * n + (f - 1)];
            t.check(count <= bound, || {
                format!("n={n} r={r} ({e} {f}): t = {count} > {bound}")
            });
        }
    }
    Ok(t)
}

/// Bounds for [`verify_all`].
#[derive(Debug, Clone)]
pub struct VerifyAllScope {
    pub n_max_sparse: usize,
    pub n_max_full: usize,
    pub ks: Vec<usize>,
}

impl Default for VerifyAllScope {
    fn default() -> Self {
        Self {
            n_max_sparse: 7,
            n_max_full: 6,
            ks: vec![0, 1, 2],
        }
    }
}

/// Every lemma over its grid. Graph-level checks and sparse round trips use
/// `n_max_sparse`; checks needing all matroids or all permutations use
/// `n_max_full`.
pub fn verify_all(scope: &VerifyAllScope) -> Result<Vec<LemmaReport>, CensusError> {
    LemmaId::ALL
        .into_iter()
        .map(|id| {
            let max_n = match id {
                LemmaId::ProductIdentity | LemmaId::BoxIso | LemmaId::Reconstruct => {
                    Some(scope.n_max_sparse)
                }
                LemmaId::KBound | LemmaId::PBlocks | LemmaId::WStable | LemmaId::TUpper => {
                    Some(scope.n_max_full)
                }
                LemmaId::Binomial | LemmaId::FKappa => None,
            };
            run_lemma(
                id,
                &VerifyScope {
                    max_n,
                    ks: Some(scope.ks.clone()),
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids_pass() {
        for id in LemmaId::ALL {
            let max_n = match id {
                LemmaId::Binomial => 64,
                _ => 4,
            };
            let rep = run_lemma(
                id,
                &VerifyScope {
                    max_n: Some(max_n),
                    ks: None,
                },
            )
            .unwrap();
            assert!(rep.passed(), "{}", rep.render(false));
            if id != LemmaId::FKappa {
                assert!(rep.checked > 0, "{id}");
            }
        }
    }

    #[test]
    fn t_upper_examples() {
        let rep = t_upper_check(4).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checked, 5 * 6);
    }

    #[test]
    fn lemma_names_round_trip() {
        for id in LemmaId::ALL {
            assert_eq!(id.as_str().parse::<LemmaId>().unwrap(), id);
        }
        assert!("nope".parse::<LemmaId>().is_err());
    }

    #[test]
    fn render_omits_timing_on_request() {
        let rep = run_lemma(LemmaId::FKappa, &VerifyScope::default()).unwrap();
        let text = rep.render(false);
        assert!(text.starts_with("lemma_id: f-kappa\n"));
        assert!(text.contains("failures: 0\n"));
        assert!(!text.contains("wall_time"));
        assert!(rep.render(true).contains("wall_time: "));
    }
}
