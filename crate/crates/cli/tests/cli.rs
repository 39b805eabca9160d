use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pcoh(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcoh")).current_dir(dir).args(args).output().expect("spawn pcoh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn workdir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("sq.pcs", "pcs: l r\nH: 1 0\nH: 0 1\n"),
        ("tri.pcs", "pcs: a b\nV: 1 0\nV: 0 1\n"),
        ("one.pcs", "pcs: a\nV: 1\n"),
        ("x.vec", "vec: 1/2 1/2\n"),
        ("h.vec", "vec: 1/2\n"),
        ("t.mat", "matrix sq.pcs tri.pcs\nl a 1/2\nr b 1/2\n"),
        ("u.mat", "matrix tri.pcs sq.pcs\na l 1\nb r 1\n"),
        ("big.mat", "matrix sq.pcs tri.pcs\nl a 1\nr a 1\n"),
        ("sq.stab", "stable one.pcs one.pcs 2\n[a,a] a 1\n"),
        ("k.ker", "kernel 2 tri.pcs\n0 a 1/2\n1 b 1\n"),
        ("l.ker", "kernel tri.pcs 3\na 0 1/2\na 1 1/2\nb 2 1\n"),
    ];
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn norm_of_half_half_in_square_is_half() {
    let d = workdir();
    let o = pcoh(d.path(), &["norm", "x.vec", "sq.pcs"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/2\n");
}

#[test]
fn morphism_norm_and_apply() {
    let d = workdir();
    assert_eq!(stdout(&pcoh(d.path(), &["norm", "t.mat"])), "1\n");
    assert_eq!(stdout(&pcoh(d.path(), &["apply", "t.mat", "x.vec"])), "vec: 1/4 1/4\n");
    let o = pcoh(d.path(), &["compose", "t.mat", "u.mat"]);
    assert_eq!(stdout(&o), "matrix sq.pcs sq.pcs\nl l 1/2\nr r 1/2\n");
}

#[test]
fn dual_and_constructions() {
    let d = workdir();
    assert_eq!(stdout(&pcoh(d.path(), &["dual", "tri.pcs"])), "pcs: a b\nH: 0 1\nH: 1 0\nV: 1 1\n");
    let t = stdout(&pcoh(d.path(), &["tensor", "sq.pcs", "sq.pcs"]));
    assert!(t.starts_with("pcs: (l,l) (l,r) (r,l) (r,r)\n"));
    assert!(t.ends_with("V: 1 1 1 1\n"));
    let l = stdout(&pcoh(d.path(), &["limpl", "tri.pcs", "sq.pcs"]));
    assert!(l.ends_with("V: 1 1 1 1\n"));
    assert_eq!(stdout(&pcoh(d.path(), &["with", "one.pcs", "one.pcs"])), "pcs: (0,a) (1,a)\nH: 0 1\nH: 1 0\nV: 1 1\n");
}

#[test]
fn closure_agrees_with_grid() {
    let d = workdir();
    let o = pcoh(d.path(), &["closure", "tri.pcs", "--grid-denominator", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("grid-agreement PASS denominator=4 points=15"));
}

#[test]
fn exponential_verbs() {
    let d = workdir();
    let o = pcoh(d.path(), &["bang", "sq.pcs", "--truncate", "2", "--vec", "x.vec"]);
    assert_eq!(stdout(&o), "vec: 1 1/2 1/2 1/4 1/4 1/4\n");
    let o = pcoh(d.path(), &["bang", "sq.pcs", "--truncate", "2"]);
    assert!(stdout(&o).starts_with("pcs: [] [l] [r] [l,l] [l,r] [r,r]\n"));
    assert_eq!(stdout(&pcoh(d.path(), &["stable-eval", "sq.stab", "h.vec"])), "vec: 1/4\n");
}

#[test]
fn stability_check_passes_on_power_series() {
    let d = workdir();
    let o = pcoh(d.path(), &["stability-check", "sq.stab", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = pcoh(d.path(), &["stability-check", "--n", "2", "--samples", "4", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn coherence_reports_are_reproducible() {
    let d = workdir();
    let a = pcoh(d.path(), &["coherence", "--max-dim", "2", "--seed", "7", "--report", "r.txt"]);
    assert_eq!(a.status.code(), Some(0));
    let b = pcoh(d.path(), &["coherence", "--max-dim", "2", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read_to_string(d.path().join("r.txt")).unwrap(), stdout(&a));
    assert!(stdout(&a).contains("pentagon\t100\t100\n"));
}

#[test]
fn stream_and_kernels() {
    let d = workdir();
    let o = pcoh(d.path(), &["stream", "--alphabet", "2", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("solution-dim=8"));
    let o = pcoh(d.path(), &["kernel", "compose", "k.ker", "l.ker"]);
    assert_eq!(stdout(&o), "kernel 2 3\n0 0 1/4\n0 1 1/4\n1 2 1\n");
    let o = pcoh(d.path(), &["kernel", "to-matrix", "k.ker", "k.mat"]);
    assert_eq!(o.status.code(), Some(0));
    let o = pcoh(d.path(), &["kernel", "from-matrix", "k.mat"]);
    assert_eq!(stdout(&o), "kernel k.mat.dom.pcs k.mat.cod.pcs\n0 a 1/2\n1 b 1\n");
}

#[test]
fn suite_example() {
    let d = workdir();
    let o = pcoh(d.path(), &["suite", "example-3-6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result PASS 4/4 checks passed, 0 instances\n"));
}

#[test]
fn input_errors_exit_2_with_prefixes() {
    let d = workdir();
    let cases: [(&[&str], &str); 5] = [
        (&["norm", "x.vec", "missing.pcs"], "error: parse error:"),
        (&["norm", "h.vec", "sq.pcs"], "error: web mismatch:"),
        (&["compose", "t.mat", "t.mat"], "error: web mismatch:"),
        (&["norm", "big.mat"], "error: invalid morphism:"),
        (&["suite", "nope"], "error: malformed input:"),
    ];
    for (args, prefix) in cases {
        let o = pcoh(d.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).starts_with(prefix), "{args:?}: {}", stderr(&o));
    }
    fs::write(d.path().join("hi.stab"), "stable one.pcs one.pcs 1\n[a,a] a 1\n").unwrap();
    let o = pcoh(d.path(), &["stable-eval", "hi.stab", "h.vec"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_check_exits_1_with_witness() {
    let d = workdir();
    let o = pcoh(d.path(), &["stability-check", "--sqrt", "--n", "3", "--grid-denominator", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL\twitness: tuple (1/4) (1/4)"), "{}", stdout(&o));
}
