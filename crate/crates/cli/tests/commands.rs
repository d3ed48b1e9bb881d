use std::path::Path;
use std::process::{Command, Output};

use gq_core::catalog::Catalog;

fn gq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gq"))
        .args(args)
        .output()
        .expect("gq runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_key(text: &str, key: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with(key))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn shipped_catalog_matches_builtin() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
    assert_eq!(Catalog::load(&dir).unwrap(), Catalog::builtin());
}

#[test]
fn mackey_klein_example() {
    let o = gq(&[
        "mackey",
        "decompose",
        "--group",
        "c2xc2",
        "--cocycle",
        "c2xc2_std",
        "--normal",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("orbits: 1\n"), "{s}");
    assert!(s.contains("orbit: 0, size: 2, d: 1, inertia: 1,"), "{s}");
    assert!(s.contains("ecp: true\n"), "{s}");
    assert!(s.starts_with("seed: 7\n"));
}

#[test]
fn pi1_three() {
    let o = gq(&["pi1", "report", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pi1: C3 x C2\n"));
}

#[test]
fn pi1_five_reports_the_failed_certificate() {
    let o = gq(&["pi1", "report", "--n", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(
        s.contains("check: q5_free_product_bounded, status: fail"),
        "{s}"
    );
    assert_eq!(s.matches("status: fail").count(), 1);
}

#[test]
fn malformed_group_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.grp");
    std::fs::write(&path, "order: 3\n0 1 2\n1 2 2\n2 0 1\n").unwrap();
    let o = gq(&["group", "--group", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(gq(&["group", "--group", "nonesuch"]).status.code(), Some(2));
    assert_eq!(
        gq(&["mackey", "decompose", "--group", "s3", "--normal", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gq(&["twisted", "--group", "s3", "--cocycle", "c2xc2_std"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gq(&["pi1", "report", "--n", "9"]).status.code(), Some(2));
    assert_eq!(gq(&["suite", "--criteria", "12"]).status.code(), Some(2));
    assert_eq!(
        gq(&["twisted", "--group", "s3", "--tol", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn group_and_cocycle_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("d4.grp");
    let c = dir.path().join("d4.coc");
    let first = gq(&[
        "group",
        "--group",
        "d4",
        "--normal",
        "0,2",
        "--emit",
        g.to_str().unwrap(),
    ]);
    let second = gq(&["group", "--group", g.to_str().unwrap(), "--normal", "0,2"]);
    assert_eq!(
        without_key(&stdout(&first), "emit"),
        stdout(&second).trim_end()
    );
    let first = gq(&[
        "cocycle",
        "--group",
        "c4xc4",
        "--cocycle",
        "c4xc4_std",
        "--emit",
        c.to_str().unwrap(),
    ]);
    let second = gq(&[
        "cocycle",
        "--group",
        "c4xc4",
        "--cocycle",
        c.to_str().unwrap(),
    ]);
    assert_eq!(
        without_key(&stdout(&first), "emit"),
        stdout(&second).trim_end()
    );
    assert!(stdout(&second).contains("nondegenerate: true"));
}

#[test]
fn mackey_descriptor_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("q");
    let o = gq(&[
        "mackey",
        "decompose",
        "--group",
        "c2xc2xc2",
        "--cocycle",
        "c2xc2xc2_bil",
        "--normal",
        "1",
        "--emit",
        emit.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let q = emit.join("quotient.grp");
    let d = emit.join("descriptor.txt");
    let o = gq(&[
        "grading",
        "classify",
        "--group",
        q.to_str().unwrap(),
        "--descriptor",
        d.to_str().unwrap(),
        "--other",
        d.to_str().unwrap(),
    ]);
    let s = stdout(&o);
    assert!(s.contains("equivalent: true"), "{s}");
    let o = gq(&[
        "grading",
        "dims",
        "--group",
        q.to_str().unwrap(),
        "--descriptor",
        d.to_str().unwrap(),
    ]);
    // quotient of order 4 by a subgroup of order 2: every component has dimension 2
    assert!(stdout(&o).contains("dims: 2 2 2 2\n"), "{}", stdout(&o));
}

#[test]
fn catalog_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    Catalog::builtin().write(dir.path()).unwrap();
    std::fs::remove_file(dir.path().join("groups").join("s4.grp")).unwrap();
    let run = |name: &str| {
        Command::new(env!("CARGO_BIN_EXE_gq"))
            .env("GQ_CATALOG_DIR", dir.path())
            .args(["group", "--group", name])
            .output()
            .unwrap()
    };
    assert_eq!(run("s3").status.code(), Some(0));
    assert_eq!(run("s4").status.code(), Some(2));
}

#[test]
fn report_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let direct = gq(&[
        "lagrangian",
        "maximal",
        "--group",
        "c4xc4",
        "--cocycle",
        "c4xc4_std",
    ]);
    let to_file = gq(&[
        "lagrangian",
        "maximal",
        "--group",
        "c4xc4",
        "--cocycle",
        "c4xc4_std",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}
