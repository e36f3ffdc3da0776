use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn koszul(args: &[&str], cache_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_koszul"));
    cmd.arg("compute").args(args).env_remove("KOSZUL_CACHE_DIR");
    if let Some(dir) = cache_env {
        cmd.env("KOSZUL_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

#[test]
fn passing_run_exits_zero() {
    let f = corpus("exterior1.pres");
    let out = koszul(
        &[
            "--algebra",
            f.to_str().unwrap(),
            "--adams-max",
            "3",
            "--tasks",
            "expand,hh,jm-compare",
        ],
        None,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# schema_version 1\n"));
    assert!(text.contains("\njm-compare\t"));
}

#[test]
fn json_output_parses() {
    let f = corpus("poly1.pres");
    let out = koszul(
        &[
            "--algebra",
            f.to_str().unwrap(),
            "--adams-max",
            "2",
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["sections"][0]["task"], "expand");
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.pres");
    std::fs::write(&f, "field Q\ngenerators\n  x 0 1\nexpect\n  0 1 2\n").unwrap();
    let out = koszul(
        &["--algebra", f.to_str().unwrap(), "--adams-max", "2"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\tfail\t"));
}

#[test]
fn parse_error_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.pres");
    std::fs::write(&f, "field Q\ngenerators\n  x 0 1\nrelations\n  x*q\n").unwrap();
    let out = koszul(&["--algebra", f.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("broken.pres:5:5:"), "{err}");
}

#[test]
fn unexpandable_algebra_exits_two() {
    let f = corpus("poly1_adams0.pres");
    let out = koszul(
        &["--algebra", f.to_str().unwrap(), "--tasks", "classify,hh"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("hh"));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("exterior1.pres");
    let args = [
        "--algebra",
        f.to_str().unwrap(),
        "--adams-max",
        "3",
        "--tasks",
        "expand,hc",
    ];
    let cold = koszul(&args, Some(dir.path()));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    let warm = koszul(&args, Some(dir.path()));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, koszul(&args, None).stdout);
}
