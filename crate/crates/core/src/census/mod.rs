//! Exhaustive censuses by automorphism class, finite verification reports
//! and their persistence.

mod cache;
pub mod enumerate;
mod verify;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{rank_window, NumericError};
use crate::johnson::{graph, Budget, JohnsonError, JohnsonGraph, JohnsonParams};
use crate::matroid::{aut_kind, AutBudget, AutKind, Matroid, MatroidError};

pub use cache::{code_version_hash, CensusCache};
pub use enumerate::{all_matroids, for_each_matroid, par_fold_matroids};
pub use verify::{
    run_lemma, t_upper_check, verify_all, LemmaId, LemmaReport, VerifyAllScope, VerifyScope,
};

/// Largest ground set for the sparse paving census.
pub const SPARSE_MAX_N: usize = 8;
/// Largest ground set for the census of all matroids.
pub const FULL_MAX_N: usize = 6;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("{kind} census is limited to n <= {limit}, got {n}")]
    Budget {
        kind: CensusKind,
        n: usize,
        limit: usize,
    },
    #[error(transparent)]
    Johnson(#[from] JohnsonError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("cache: {0}")]
    Cache(String),
    #[error("{0}")]
    Usage(String),
}

impl CensusError {
    pub fn is_budget(&self) -> bool {
        match self {
            Self::Budget { .. } => true,
            Self::Johnson(e) => e.is_budget(),
            Self::Matroid(e) => e.is_budget(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusKind {
    /// Sorts before `SparsePaving`, matching the CSV's string order.
    AllMatroids,
    SparsePaving,
}

impl CensusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::AllMatroids => "all_matroids",
            Self::SparsePaving => "sparse_paving",
        }
    }

    pub fn max_n(self) -> usize {
        match self {
            Self::AllMatroids => FULL_MAX_N,
            Self::SparsePaving => SPARSE_MAX_N,
        }
    }
}

impl fmt::Display for CensusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CensusKind {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sparse" | "sparse_paving" => Ok(Self::SparsePaving),
            "all" | "all_matroids" => Ok(Self::AllMatroids),
            other => Err(CensusError::Usage(format!("unknown census kind {other:?}"))),
        }
    }
}

/// Matroids on `[n]` of rank `r` tallied by automorphism class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CensusRecord {
    pub kind: CensusKind,
    pub n: usize,
    pub r: usize,
    pub total: u128,
    pub aut_trivial: u128,
    pub aut_single_transposition: u128,
    pub aut_other: u128,
}

impl CensusRecord {
    fn empty(kind: CensusKind, n: usize, r: usize) -> Self {
        Self {
            kind,
            n,
            r,
            total: 0,
            aut_trivial: 0,
            aut_single_transposition: 0,
            aut_other: 0,
        }
    }

    fn add(&mut self, kind: AutKind) {
        self.total += 1;
        match kind {
            AutKind::Trivial => self.aut_trivial += 1,
            AutKind::SingleTransposition => self.aut_single_transposition += 1,
            AutKind::Other => self.aut_other += 1,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.aut_trivial += other.aut_trivial;
        self.aut_single_transposition += other.aut_single_transposition;
        self.aut_other += other.aut_other;
        self
    }

    pub fn is_consistent(&self) -> bool {
        self.aut_trivial + self.aut_single_transposition + self.aut_other == self.total
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            self.r,
            self.total,
            self.aut_trivial,
            self.aut_single_transposition,
            self.aut_other
        )
    }
}

pub const CSV_HEADER: &str = "kind,n,r,total,aut_trivial,aut_single_transposition,aut_other";

/// Canonical CSV: header, then rows sorted by `(kind, n, r)`, LF endings.
pub fn to_csv(records: &[CensusRecord]) -> String {
    let mut rows = records.to_vec();
    rows.sort_by_key(|r| (r.kind, r.n, r.r));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn classify(m: &Matroid) -> AutKind {
    aut_kind(
        m,
        AutBudget {
            max_n: SPARSE_MAX_N,
        },
    )
    .expect("census ground sets are within the automorphism budget")
    .kind
}

/// Sparse paving matroids on `[n]` of rank `r`, one per stable set of
/// `J(n, r)` that leaves a basis.
pub fn sparse_record(n: usize, r: usize) -> Result<CensusRecord, CensusError> {
    check_budget(CensusKind::SparsePaving, n)?;
    let kind = CensusKind::SparsePaving;
    let g = JohnsonGraph::new(JohnsonParams::new(n, r as isize), Budget::default())?;
    let order = g.order();
    let record = graph::par_fold_stable_sets(
        g.graph(),
        || CensusRecord::empty(kind, n, r),
        |acc, chosen| {
            // taking every vertex leaves no basis
            if chosen.len() == order {
                return;
            }
            let nonbases = chosen.iter().map(|&v| g.vertex(v)).collect();
            acc.add(classify(&Matroid::from_sorted_unchecked(n, r, nonbases)));
        },
        CensusRecord::merge,
    );
    Ok(record)
}

/// All matroids on `[n]` of rank `r`.
pub fn full_record(n: usize, r: usize) -> Result<CensusRecord, CensusError> {
    check_budget(CensusKind::AllMatroids, n)?;
    let kind = CensusKind::AllMatroids;
    Ok(par_fold_matroids(
        n,
        r,
        || CensusRecord::empty(kind, n, r),
        |acc, m| acc.add(classify(&m)),
        CensusRecord::merge,
    ))
}

fn check_budget(kind: CensusKind, n: usize) -> Result<(), CensusError> {
    if n > kind.max_n() {
        return Err(CensusError::Budget {
            kind,
            n,
            limit: kind.max_n(),
        });
    }
    Ok(())
}

pub fn record(kind: CensusKind, n: usize, r: usize) -> Result<CensusRecord, CensusError> {
    match kind {
        CensusKind::SparsePaving => sparse_record(n, r),
        CensusKind::AllMatroids => full_record(n, r),
    }
}

/// Records for every `0 <= r <= n <= n_max`, reusing and filling `cache`
/// when given. Each record is stored as soon as it is computed, so an
/// interrupted run resumes where it stopped.
pub fn census(
    kind: CensusKind,
    n_max: usize,
    cache: Option<&CensusCache>,
) -> Result<Vec<CensusRecord>, CensusError> {
    check_budget(kind, n_max)?;
    let mut out = Vec::new();
    for n in 0..=n_max {
        for r in 0..=n {
            if let Some(hit) = cache.and_then(|c| c.load(kind, n, r)) {
                out.push(hit);
                continue;
            }
            let rec = record(kind, n, r)?;
            if let Some(c) = cache {
                c.store(&rec)?;
            }
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn sparse_census(n_max: usize) -> Result<Vec<CensusRecord>, CensusError> {
    census(CensusKind::SparsePaving, n_max, None)
}

pub fn full_census(n_max: usize) -> Result<Vec<CensusRecord>, CensusError> {
    census(CensusKind::AllMatroids, n_max, None)
}

/// Stable sets of `J(n, r)` that do not correspond to a matroid: at
/// `r ∈ {0, n}` the graph is one vertex and taking it leaves no basis.
pub fn stable_sets_without_basis(n: usize, r: usize) -> u128 {
    u128::from(r == 0 || r == n)
}

/// Per-`n` totals and class fractions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrendRow {
    pub kind: CensusKind,
    pub n: usize,
    pub total: u128,
    pub trivial: u128,
    pub single_transposition: u128,
    pub asymmetric_fraction: Ratio<u128>,
    pub single_transposition_fraction: Ratio<u128>,
}

impl TrendRow {
    pub fn asymmetric_f64(&self) -> f64 {
        ratio_f64(&self.asymmetric_fraction)
    }

    pub fn single_transposition_f64(&self) -> f64 {
        ratio_f64(&self.single_transposition_fraction)
    }
}

pub fn ratio_f64(q: &Ratio<u128>) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Aggregates records by `(kind, n)`.
pub fn trend_report(records: &[CensusRecord]) -> Vec<TrendRow> {
    let mut rows: Vec<TrendRow> = Vec::new();
    let mut sorted = records.to_vec();
    sorted.sort_by_key(|r| (r.kind, r.n, r.r));
    for rec in sorted {
        match rows.last_mut() {
            Some(row) if row.kind == rec.kind && row.n == rec.n => {
                row.total += rec.total;
                row.trivial += rec.aut_trivial;
                row.single_transposition += rec.aut_single_transposition;
            }
            _ => rows.push(TrendRow {
                kind: rec.kind,
                n: rec.n,
                total: rec.total,
                trivial: rec.aut_trivial,
                single_transposition: rec.aut_single_transposition,
                asymmetric_fraction: Ratio::from_integer(0),
                single_transposition_fraction: Ratio::from_integer(0),
            }),
        }
    }
    for row in &mut rows {
        row.asymmetric_fraction = Ratio::new(row.trivial, row.total.max(1));
        row.single_transposition_fraction = Ratio::new(row.single_transposition, row.total.max(1));
    }
    rows
}

/// Fractions `s(n, r) / s(n)` and the mass inside the rank window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankDistribution {
    pub n: usize,
    pub window: (u64, u64),
    pub masses: Vec<Ratio<u128>>,
    pub in_window: Ratio<u128>,
    pub out_window: Ratio<u128>,
}

/// Default `β`, just above `sqrt(ln 2 / 2) ≈ 0.5887`.
pub const DEFAULT_BETA: f64 = 0.6;

pub fn rank_distribution(
    records: &[CensusRecord],
    n: usize,
    beta: f64,
) -> Result<RankDistribution, CensusError> {
    let mut by_rank: Vec<u128> = vec![0; n + 1];
    let mut seen = vec![false; n + 1];
    for rec in records
        .iter()
        .filter(|r| r.kind == CensusKind::SparsePaving && r.n == n)
    {
        by_rank[rec.r] = rec.total;
        seen[rec.r] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(CensusError::Usage(format!(
            "sparse census records for n = {n} are incomplete"
        )));
    }
    let window = rank_window(n as u64, beta)?;
    let total: u128 = by_rank.iter().sum();
    let masses: Vec<Ratio<u128>> = by_rank.iter().map(|&c| Ratio::new(c, total)).collect();
    let inside: u128 = by_rank
        .iter()
        .enumerate()
        .filter(|(r, _)| (window.0..=window.1).contains(&(*r as u64)))
        .map(|(_, c)| c)
        .sum();
    Ok(RankDistribution {
        n,
        window,
        masses,
        in_window: Ratio::new(inside, total),
        out_window: Ratio::new(total - inside, total),
    })
}
