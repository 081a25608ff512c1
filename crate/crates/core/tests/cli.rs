use std::path::Path;
use std::process::{Command, Output};

fn ldc3(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldc3"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hadamard_pipeline_validates() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ldc3(
        dir.path(),
        &[
            "gen", "hadamard", "--k", "4", "--seed", "7", "--out", "a.sldc",
        ],
    );
    assert_eq!(gen.status.code(), Some(0));
    assert!(stdout(&gen).starts_with("seed 7\n"));
    let v = ldc3(dir.path(), &["validate", "a.sldc"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(stdout(&v).contains("exhaustive ok\n"));
    let o = ldc3(dir.path(), &["oracle", "a.sldc", "--brute-force"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("holds\n"));
}

#[test]
fn planted_pipeline_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        ldc3(dir.path(), &["gen", "planted", "--out", "v.cheg"])
            .status
            .code(),
        Some(0)
    );
    let o = ldc3(dir.path(), &["oracle", "v.cheg"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("violation color="));
    assert!(text.contains("edges 0 1 2 3\n"));

    let w = ldc3(
        dir.path(),
        &[
            "witness",
            "v.cheg",
            "--degree-threshold",
            "1",
            "--roots",
            "30",
        ],
    );
    assert_eq!(w.status.code(), Some(1));
    let text = stdout(&w);
    assert!(text.contains("certificate color="));
    assert!(text.contains("edges 0 1 2 3\n"));
    assert!(text.ends_with("verified ok\n"));
}

#[test]
fn stats_examples() {
    let dir = tempfile::tempdir().unwrap();
    ldc3(dir.path(), &["gen", "planted", "--out", "v.cheg"]);
    let s = stdout(&ldc3(dir.path(), &["stats", "v.cheg"]));
    assert!(s.starts_with("n 6\nk 4\nm 4\ndelta 1/6\n"), "{s}");
    assert!(s.contains("degree 2 6\n"));
    assert!(s.contains("cherry_edges 24\n"));

    ldc3(
        dir.path(),
        &["gen", "hadamard", "--k", "3", "--out", "h.cheg"],
    );
    let s = stdout(&ldc3(dir.path(), &["stats", "h.cheg"]));
    assert!(s.contains("m 3\n") && s.contains("delta 1/8\n"), "{s}");

    std::fs::write(dir.path().join("e.cheg"), "cheg 1\nn 5\nk 2\n").unwrap();
    let s = stdout(&ldc3(dir.path(), &["stats", "e.cheg"]));
    assert!(
        s.starts_with("n 5\nk 2\nm 0\ndelta 0/1\ndegree 0 5\ncherry_edges 0\n"),
        "{s}"
    );
}

#[test]
fn siggraph_reports_identity() {
    let dir = tempfile::tempdir().unwrap();
    ldc3(
        dir.path(),
        &[
            "gen", "hadamard", "--k", "6", "--seed", "2", "--out", "h.cheg",
        ],
    );
    let o = ldc3(dir.path(), &["siggraph", "h.cheg", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("exact_identity ok\n"));
    let ratio = text
        .lines()
        .find_map(|l| l.strip_prefix("claim24_max_ratio "))
        .unwrap();
    let (p, q) = ratio.split_once('/').unwrap();
    assert!(p.parse::<u64>().unwrap() <= q.parse::<u64>().unwrap());
}

#[test]
fn invalid_inputs_exit_2_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cheg"), "cheg 1\nn 4\nk 1\ne 0 1 x 0\n").unwrap();
    for args in [
        &["oracle", "missing.cheg"][..],
        &["oracle", "bad.cheg"],
        &["stats", "bad.cheg"],
        &["frobnicate"],
        &["gen", "hadamard", "--k", "4", "--wat"],
        &["gen", "hadamard", "--k", "30"],
        &["gen", "random", "--n", "10", "--k", "2", "--delta", "1/0"],
        &["witness", "bad.cheg", "--growth", "1/2"],
        &["witness", "missing.cheg", "--growth", "1/2"],
        &["witness", "missing.cheg", "--roots", "0"],
    ] {
        let o = ldc3(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn failed_generation_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = ldc3(
        dir.path(),
        &[
            "gen", "hadamard", "--k", "3", "--delta", "1/2", "--out", "x.sldc",
        ],
    );
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn demo2q_hypercube() {
    let dir = tempfile::tempdir().unwrap();
    let o = ldc3(dir.path(), &["demo2q", "--k", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("distinct_signatures 1024\nconsistent ok\n"));
}
