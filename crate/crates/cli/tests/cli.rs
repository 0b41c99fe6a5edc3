use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use matroid_symmetry::matroid::{contract_pair, delete_pair, io, Matroid};

fn matsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn counts_stable_sets() {
    let o = matsym(&["stable-sets", "--n", "4", "--r", "2", "--count-only"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "10\n");
    let o = matsym(&["stable-sets", "--n", "8", "--r", "4", "--count-only"]);
    assert_eq!(stdout(&o), "3852576\n");
    let o = matsym(&[
        "stable-sets",
        "--n",
        "4",
        "--r",
        "2",
        "--invariant",
        "(1 2)",
        "--count-only",
    ]);
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn lists_invariant_stable_sets() {
    let o = matsym(&[
        "stable-sets",
        "--n",
        "4",
        "--r",
        "2",
        "--invariant",
        "(1 2)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "\n{1,2}\n{1,2},{3,4}\n{3,4}\n");
    let o = matsym(&[
        "stable-sets",
        "--n",
        "3",
        "--r",
        "1",
        "--format",
        "json-lines",
    ]);
    assert_eq!(stdout(&o), "[]\n[[1]]\n[[2]]\n[[3]]\n");
}

#[test]
fn classifies_the_parallel_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "pp.json", r#"{"n":4,"r":2,"nonbases":[[1,2]]}"#);
    let o = matsym(&["aut", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("order: 4\n"), "{text}");
    assert!(text.contains("kind: other\n"), "{text}");
}

#[test]
fn reconstructs_from_minors() {
    let dir = tempfile::tempdir().unwrap();
    let m = Matroid::validate_bits(6, 3, vec![0b000111, 0b111000]).unwrap();
    let del = write(
        dir.path(),
        "del.json",
        &io::to_json(&delete_pair(&m, 1, 2).unwrap()),
    );
    let con = write(
        dir.path(),
        "con.json",
        &io::to_json(&contract_pair(&m, 1, 2).unwrap()),
    );
    let out = dir.path().join("m.json");
    let o = matsym(&[
        "reconstruct",
        "--del",
        &del,
        "--con",
        &con,
        "--n",
        "6",
        "--r",
        "3",
        "--e",
        "1",
        "--f",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(o.stdout.is_empty());
    let got = io::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(got, m);
}

#[test]
fn verify_reports_zero_failures() {
    let o = matsym(&[
        "verify",
        "--lemma",
        "product-identity",
        "--max-n",
        "6",
        "--no-timing",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("lemma_id: product-identity\n"));
    assert!(text.contains("failures: 0\n"));
    assert!(!text.contains("wall_time"));
    let o = matsym(&["verify", "--lemma", "kbound", "--max-n", "4", "--k", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k in {0,1}"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let runs: Vec<Output> = ["1", "3"]
        .iter()
        .map(|t| matsym(&["--threads", t, "census", "--kind", "sparse", "--max-n", "6"]))
        .collect();
    assert_eq!(runs[0].status.code(), Some(0));
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let text = stdout(&runs[0]);
    assert!(text.starts_with("kind,n,r,total,aut_trivial,aut_single_transposition,aut_other\n"));
    assert!(text.contains("\nsparse_paving,4,2,10,0,0,10\n"));
    let verify: Vec<Output> = ["1", "2"]
        .iter()
        .map(|t| matsym(&["--threads", t, "--no-timing", "verify", "--max-n", "4"]))
        .collect();
    assert_eq!(verify[0].status.code(), Some(0));
    assert_eq!(verify[0].stdout, verify[1].stdout);
}

#[test]
fn census_cache_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "census",
        "--kind",
        "all",
        "--max-n",
        "5",
        "--cache",
        cache.to_str().unwrap(),
    ];
    let first = matsym(&args);
    let second = matsym(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(cache.join("all_matroids_n5_r2.json").exists());
    let totals: u128 = stdout(&first)
        .lines()
        .filter(|l| l.starts_with("all_matroids,5,"))
        .map(|l| l.split(',').nth(3).unwrap().parse::<u128>().unwrap())
        .sum();
    assert_eq!(totals, 406);
}

#[test]
fn rank_distribution_sums_to_one() {
    let o = matsym(&["rank-dist", "--n", "4", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("window: [0, 4]\nin_window: 1 (1.000000)\n"),
        "{text}"
    );
    let o = matsym(&["rank-dist", "--n", "4"]);
    let text = stdout(&o);
    assert!(
        text.contains("window: [1, 3]\nin_window: 10/11 (0.909091)\n"),
        "{text}"
    );
    assert_eq!(
        matsym(&["rank-dist", "--n", "4", "--beta", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage errors
    assert_eq!(matsym(&["stable-sets", "--n", "4"]).status.code(), Some(2));
    assert_eq!(matsym(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        matsym(&["verify", "--lemma", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        matsym(&[
            "stable-sets",
            "--n",
            "4",
            "--r",
            "2",
            "--invariant",
            "(1 9)"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        matsym(&["census", "--kind", "odd", "--max-n", "3"])
            .status
            .code(),
        Some(2)
    );
    // domain errors
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"n":4,"r":2,"nonbases":[[1,2],[1,3]]}"#,
    );
    let o = matsym(&["aut", "--input", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    // budget refusals
    assert_eq!(
        matsym(&["stable-sets", "--n", "12", "--r", "6", "--count-only"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        matsym(&["census", "--kind", "all", "--max-n", "7"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        matsym(&["census", "--kind", "sparse", "--max-n", "9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(matsym(&["--help"]).status.code(), Some(0));
}

#[test]
fn broken_reconstruction_promise_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    // a deletion without loops next to a contraction with one
    let del = write(dir.path(), "del.json", r#"{"n":2,"r":1,"nonbases":[]}"#);
    let con = write(dir.path(), "con.json", r#"{"n":2,"r":1,"nonbases":[[1]]}"#);
    let o = matsym(&[
        "reconstruct",
        "--del",
        &del,
        "--con",
        &con,
        "--n",
        "4",
        "--r",
        "2",
        "--e",
        "1",
        "--f",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
}
