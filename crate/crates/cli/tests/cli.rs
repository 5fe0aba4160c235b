use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn derand(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derand"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn auto_budget_is_ceil_2nd_over_k_plus_slack() {
    let dir = tempfile::tempdir().unwrap();
    // Path on 5 vertices: d = 2, so 2nd/k = 20/6 with k = 6.
    write(
        dir.path(),
        "p.col",
        "p edge 5 4\ne 1 2\ne 2 3\ne 3 4\ne 4 5\n",
    );
    let out = derand(&["solve-graph", "p.col", "--palette", "6"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let l = lines(&out);
    assert_eq!(l[1]["seed_bits"], 4 + 8);
    assert_eq!(l[1]["found"], true);
    assert_eq!(l[0]["digest"], l[1]["digest"]);

    let out = derand(
        &[
            "solve-graph",
            "p.col",
            "--palette",
            "6",
            "--slack-bits",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(lines(&out)[1]["seed_bits"], 7);
}

#[test]
fn auto_overlap_uses_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = derand(
        &[
            "gen-hyper",
            "--n",
            "100",
            "--k",
            "6",
            "--m",
            "40",
            "--out",
            "h.hg",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("max overlap = 10"), "{summary}");
    let bounds = derand(&["bounds", "h.hg"], dir.path());
    let l = lines(&bounds);
    assert_eq!(l[1]["threshold"], 10);
    assert_eq!(l[1]["satisfied"], true);
}

#[test]
fn play_aggregates_within_bound_rate() {
    let dir = tempfile::tempdir().unwrap();
    derand(
        &[
            "gen-hyper",
            "--n",
            "90",
            "--k",
            "6",
            "--m",
            "30",
            "--out",
            "h.hg",
        ],
        dir.path(),
    );
    let out = derand(
        &["play", "h.hg", "--epsilon", "0.5", "--trials", "50"],
        dir.path(),
    );
    let l = lines(&out);
    assert_eq!(l.len(), 1 + 50 + 1);
    let agg = l.last().unwrap();
    assert_eq!(agg["trials"], 50);
    assert!(agg["within_bound_rate"].as_f64().unwrap() >= 0.8);
    assert_eq!(agg["bound"], 22.5);
}

#[test]
fn single_game_transcript_layout() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "h.hg",
        "p hedge 12 2 6\nh 1 2 3 4 5 6\nh 7 8 9 10 11 12\n",
    );
    let out = derand(&["play", "h.hg", "--seed", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let l = lines(&out);
    assert_eq!(l[1]["n"], 12);
    assert_eq!(l[1]["bound"], 3.0);
    assert_eq!(l[2]["turn"], 1);
    assert_eq!(l[2]["report"][0], serde_json::json!([0, 1, 2, 3, 4, 5]));
    assert_eq!(l.last().unwrap()["won"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.col", "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    let found = derand(
        &["solve-graph", "k3.col", "--palette", "3", "--budget", "8"],
        dir.path(),
    );
    assert_eq!(found.status.code(), Some(0));
    let none = derand(
        &["solve-graph", "k3.col", "--palette", "2", "--budget", "8"],
        dir.path(),
    );
    assert_eq!(none.status.code(), Some(1));
    assert_eq!(lines(&none)[1]["found"], false);
    // 2d > k: auto budget undefined.
    let bad_budget = derand(&["solve-graph", "k3.col", "--palette", "3"], dir.path());
    assert_eq!(bad_budget.status.code(), Some(2));
    let missing = derand(&["bounds", "nope.col", "--palette", "3"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    let guard = derand(
        &["solve-graph", "k3.col", "--palette", "3", "--budget", "41"],
        dir.path(),
    );
    assert_eq!(guard.status.code(), Some(2));
}

#[test]
fn malformed_input_reports_line_number() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.hg", "p hedge 4 2 3\nh 1 2 3\n\nh 1 2 2\n");
    let out = derand(&["mt", "bad.hg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.hg: line 4"), "{err}");
}

#[test]
fn estimate_triangle_exact_path() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.col", "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    let out = derand(
        &["estimate", "k3.col", "--palette", "3", "--trials", "20000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[1];
    assert!((r["exact"].as_f64().unwrap() - 6.0 / 27.0).abs() < 1e-15);
    assert!((r["lower_bound"].as_f64().unwrap() - 1.0 / 27.0).abs() < 1e-15);
    assert_eq!(r["within_band"], true);
}

#[test]
fn mt_trace_and_coloring_file() {
    let dir = tempfile::tempdir().unwrap();
    derand(
        &[
            "gen-hyper",
            "--n",
            "60",
            "--k",
            "6",
            "--m",
            "20",
            "--out",
            "h.hg",
        ],
        dir.path(),
    );
    let out = derand(
        &["mt", "h.hg", "--seed", "2", "--coloring", "c.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let l = lines(&out);
    assert_eq!(l[1]["cap"], 2000);
    assert_eq!(l.last().unwrap()["valid"], true);
    let coloring = std::fs::read_to_string(dir.path().join("c.txt")).unwrap();
    assert!(coloring.starts_with("s color 60 2\n"));
}

#[test]
fn out_flag_writes_report_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen-graph", "--n", "25", "--d", "3", "--seed", "8", "--out"];
    derand(&[&args[..], &["a.col"]].concat(), dir.path());
    derand(&[&args[..], &["b.col"]].concat(), dir.path());
    let a = std::fs::read(dir.path().join("a.col")).unwrap();
    let b = std::fs::read(dir.path().join("b.col")).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(b"p edge 25 "));

    let run = || derand(&["solve-graph", "a.col", "--palette", "7"], dir.path()).stdout;
    assert_eq!(run(), run());
}
