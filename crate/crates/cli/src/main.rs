//! `matsym`: enumeration, automorphism classification, reconstruction,
//! censuses and finite lemma checks from the command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 budget refusal.
//! Results go to stdout or `--out`; diagnostics go to stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matroid_symmetry::census::{
    self, rank_distribution, ratio_f64, run_lemma, to_csv, trend_report, verify_all, CensusCache,
    CensusError, CensusKind, CensusRecord, LemmaId, LemmaReport, VerifyAllScope, VerifyScope,
    DEFAULT_BETA,
};
use matroid_symmetry::johnson::{
    count_invariant_stable_sets, count_stable_sets, enumerate_invariant_stable_sets, stable_sets,
    Budget, JohnsonError, JohnsonParams, StableSet,
};
use matroid_symmetry::matroid::{
    automorphism_classification, automorphism_group, io, reconstruct_from_minors, AutBudget,
    Matroid, MatroidError,
};
use matroid_symmetry::permgroup::Permutation;

#[derive(Parser)]
#[command(
    name = "matsym",
    version,
    about = "Johnson-graph stable sets and matroid symmetry"
)]
struct Cli {
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Leave out timing lines so output is byte-reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    JsonLines,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Stable sets of J(n, r), optionally only those fixed by a permutation.
    StableSets {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        r: isize,
        /// Permutation in cycle notation, e.g. "(1 2)(3 4 5)".
        #[arg(long)]
        invariant: Option<String>,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group of a matroid file.
    Aut {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rebuild M from M\ef and M/ef when (e f) is an automorphism of M.
    Reconstruct {
        #[arg(long = "del")]
        deletion: PathBuf,
        #[arg(long = "con")]
        contraction: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Census by automorphism class.
    Census {
        #[arg(long, value_parser = parse_kind)]
        kind: CensusKind,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory of per-(kind, n, r) records reused across runs.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Finite checks of one lemma, or of all of them when --lemma is absent.
    Verify {
        #[arg(long, value_parser = parse_lemma)]
        lemma: Option<LemmaId>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long = "k", value_delimiter = ',')]
        ks: Option<Vec<usize>>,
    },
    /// Sparse paving mass per rank and inside the rank window.
    RankDist {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BETA)]
        beta: f64,
    },
}

fn parse_kind(s: &str) -> Result<CensusKind, String> {
    s.parse().map_err(|e: CensusError| e.to_string())
}

fn parse_lemma(s: &str) -> Result<LemmaId, String> {
    s.parse().map_err(|e: CensusError| e.to_string())
}

enum Failure {
    Domain(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Domain(_) => 1,
            Self::Usage(_) => 2,
            Self::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Domain(m) | Self::Usage(m) | Self::Budget(m) => m,
        }
    }
}

impl From<JohnsonError> for Failure {
    fn from(e: JohnsonError) -> Self {
        if e.is_budget() {
            Self::Budget(e.to_string())
        } else {
            Self::Domain(e.to_string())
        }
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Self {
        if e.is_budget() {
            Self::Budget(e.to_string())
        } else {
            Self::Domain(e.to_string())
        }
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        if e.is_budget() {
            Self::Budget(e.to_string())
        } else if matches!(e, CensusError::Usage(_)) {
            Self::Usage(e.to_string())
        } else {
            Self::Domain(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successes; everything else is a usage error
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("matsym: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let timing = !cli.no_timing;
    match cli.command {
        Command::StableSets {
            n,
            r,
            invariant,
            count_only,
            out,
        } => {
            let format = cli.format.unwrap_or(Format::Plain);
            let text = stable_sets_cmd(n, r, invariant.as_deref(), count_only, format)?;
            emit(out.as_deref(), &text)
        }
        Command::Aut { input } => {
            let m = read_matroid(&input)?;
            emit(None, &aut_cmd(&m, cli.format.unwrap_or(Format::Plain))?)
        }
        Command::Reconstruct {
            deletion,
            contraction,
            n,
            r,
            e,
            f,
            out,
        } => {
            if e == f || e == 0 || f == 0 || e > n || f > n {
                return Err(Failure::Usage(format!(
                    "--e and --f must be distinct elements of 1..={n}"
                )));
            }
            let del = read_matroid(&deletion)?;
            let con = read_matroid(&contraction)?;
            let m = reconstruct_from_minors(&del, &con, n, r, e.min(f), e.max(f))?;
            emit(out.as_deref(), &format!("{}\n", io::to_json(&m)))
        }
        Command::Census {
            kind,
            max_n,
            out,
            cache,
        } => {
            if max_n > kind.max_n() {
                return Err(Failure::Budget(format!(
                    "{kind} census is limited to n <= {}, got {max_n}",
                    kind.max_n()
                )));
            }
            let cache = cache
                .map(CensusCache::new)
                .transpose()
                .map_err(Failure::from)?;
            let start = Instant::now();
            let records = census::census(kind, max_n, cache.as_ref())?;
            let format = cli.format.unwrap_or(Format::Csv);
            let mut text = census_text(&records, format);
            if timing && format == Format::Plain {
                let _ = writeln!(text, "wall_time: {:.3}s", start.elapsed().as_secs_f64());
            }
            emit(out.as_deref(), &text)
        }
        Command::Verify { lemma, max_n, ks } => {
            let reports = match lemma {
                Some(id) => vec![run_lemma(id, &VerifyScope { max_n, ks })?],
                None => {
                    let mut scope = VerifyAllScope::default();
                    if let Some(n) = max_n {
                        scope.n_max_sparse = n;
                        scope.n_max_full = n.min(census::FULL_MAX_N);
                    }
                    if let Some(ks) = ks {
                        scope.ks = ks;
                    }
                    verify_all(&scope)?
                }
            };
            let text = verify_text(&reports, cli.format.unwrap_or(Format::Plain), timing);
            emit(None, &text)?;
            let failed: usize = reports.iter().map(|r| r.failures.len()).sum();
            if failed > 0 {
                return Err(Failure::Domain(format!("{failed} check(s) failed")));
            }
            Ok(())
        }
        Command::RankDist { n, beta } => {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Failure::Usage(format!(
                    "--beta must be positive, got {beta}"
                )));
            }
            if n > census::SPARSE_MAX_N {
                return Err(Failure::Budget(format!(
                    "sparse paving census is limited to n <= {}, got {n}",
                    census::SPARSE_MAX_N
                )));
            }
            let records = (0..=n)
                .map(|r| census::sparse_record(n, r))
                .collect::<Result<Vec<_>, _>>()?;
            let dist = rank_distribution(&records, n, beta)?;
            emit(None, &rank_text(&dist, cli.format.unwrap_or(Format::Plain)))
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_matroid(path: &Path) -> Result<Matroid, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    io::from_json(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn members_json(s: &StableSet) -> Value {
    let sets: Vec<Vec<usize>> = s.members().iter().map(|x| x.elements().collect()).collect();
    json!(sets)
}

fn stable_sets_cmd(
    n: usize,
    r: isize,
    invariant: Option<&str>,
    count_only: bool,
    format: Format,
) -> Result<String, Failure> {
    let params = JohnsonParams::new(n, r);
    let budget = Budget::default();
    let perm = invariant
        .map(|text| Permutation::parse(n, text).map_err(|e| Failure::Usage(e.to_string())))
        .transpose()?;
    if count_only {
        let count = match &perm {
            Some(p) => count_invariant_stable_sets(params, p, budget)?,
            None => count_stable_sets(params, budget)?,
        };
        return Ok(match format {
            Format::JsonLines => {
                format!("{}\n", json!({"n": n, "r": r, "count": count.to_string()}))
            }
            Format::Csv => format!("n,r,count\n{n},{r},{count}\n"),
            Format::Plain => format!("{count}\n"),
        });
    }
    let sets = match &perm {
        Some(p) => enumerate_invariant_stable_sets(params, p, budget)?.sets,
        None => stable_sets(params, budget)?,
    };
    let mut text = String::new();
    if format == Format::Csv {
        text.push_str("size,members\n");
    }
    for s in &sets {
        match format {
            Format::Plain => {
                let _ = writeln!(text, "{s}");
            }
            Format::JsonLines => {
                let _ = writeln!(text, "{}", members_json(s));
            }
            Format::Csv => {
                let members: Vec<String> = s
                    .members()
                    .iter()
                    .map(|x| {
                        x.elements()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                let _ = writeln!(text, "{},{}", s.len(), members.join(";"));
            }
        }
    }
    Ok(text)
}

fn aut_cmd(m: &Matroid, format: Format) -> Result<String, Failure> {
    let budget = AutBudget::default();
    let c = automorphism_classification(m, budget)?;
    let group = automorphism_group(m, budget)?;
    let elements: Vec<String> = group.iter().map(|p| p.to_string()).collect();
    let pair = c.generator_pair.map(|(e, f)| format!("({e} {f})"));
    Ok(match format {
        Format::JsonLines => format!(
            "{}\n",
            json!({
                "order": c.group_order,
                "kind": c.kind.to_string(),
                "generator": pair,
                "automorphisms": elements,
            })
        ),
        Format::Csv => format!(
            "order,kind,generator\n{},{},{}\n",
            c.group_order,
            c.kind,
            pair.unwrap_or_default()
        ),
        Format::Plain => {
            let mut text = format!("order: {}\nkind: {}\n", c.group_order, c.kind);
            if let Some(p) = pair {
                let _ = writeln!(text, "generator: {p}");
            }
            let _ = writeln!(text, "automorphisms: {}", elements.join(" "));
            text
        }
    })
}

fn census_text(records: &[CensusRecord], format: Format) -> String {
    match format {
        Format::Csv => to_csv(records),
        Format::JsonLines => {
            let mut sorted = records.to_vec();
            sorted.sort_by_key(|r| (r.kind, r.n, r.r));
            sorted
                .iter()
                .map(|r| {
                    format!(
                        "{}\n",
                        json!({
                            "kind": r.kind.as_str(),
                            "n": r.n,
                            "r": r.r,
                            "total": r.total.to_string(),
                            "aut_trivial": r.aut_trivial.to_string(),
                            "aut_single_transposition": r.aut_single_transposition.to_string(),
                            "aut_other": r.aut_other.to_string(),
                        })
                    )
                })
                .collect()
        }
        Format::Plain => {
            let mut text = to_csv(records);
            text.push_str("\nn,total,asymmetric_fraction,single_transposition_fraction\n");
            for row in trend_report(records) {
                let _ = writeln!(
                    text,
                    "{},{},{} ({:.6}),{} ({:.6})",
                    row.n,
                    row.total,
                    row.asymmetric_fraction,
                    row.asymmetric_f64(),
                    row.single_transposition_fraction,
                    row.single_transposition_f64()
                );
            }
            text
        }
    }
}

fn report_json(r: &LemmaReport, timing: bool) -> Value {
    let mut v = json!({
        "lemma_id": r.lemma_id.as_str(),
        "grid": r.grid,
        "checked": r.checked,
        "failures": r.failures,
    });
    if timing {
        v["wall_time"] = json!(r.wall_time.as_secs_f64());
    }
    v
}

fn verify_text(reports: &[LemmaReport], format: Format, timing: bool) -> String {
    match format {
        Format::JsonLines => reports
            .iter()
            .map(|r| format!("{}\n", report_json(r, timing)))
            .collect(),
        Format::Csv => {
            let mut text = String::from("lemma_id,checked,failures\n");
            for r in reports {
                let _ = writeln!(text, "{},{},{}", r.lemma_id, r.checked, r.failures.len());
            }
            text
        }
        Format::Plain => reports
            .iter()
            .map(|r| r.render(timing))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn rank_text(d: &census::RankDistribution, format: Format) -> String {
    match format {
        Format::JsonLines => {
            let masses: Vec<String> = d.masses.iter().map(|q| q.to_string()).collect();
            format!(
                "{}\n",
                json!({
                    "n": d.n,
                    "window": [d.window.0, d.window.1],
                    "masses": masses,
                    "in_window": d.in_window.to_string(),
                    "out_window": d.out_window.to_string(),
                })
            )
        }
        Format::Csv | Format::Plain => {
            let mut text = String::from("r,mass,approx\n");
            for (r, q) in d.masses.iter().enumerate() {
                let _ = writeln!(text, "{r},{q},{:.6}", ratio_f64(q));
            }
            if format == Format::Plain {
                let _ = writeln!(
                    text,
                    "window: [{}, {}]\nin_window: {} ({:.6})\nout_window: {} ({:.6})",
                    d.window.0,
                    d.window.1,
                    d.in_window,
                    ratio_f64(&d.in_window),
                    d.out_window,
                    ratio_f64(&d.out_window)
                );
            }
            text
        }
    }
}
