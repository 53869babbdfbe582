use std::fs;
use std::path::Path;

use ffbias::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ffbias"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Every file under `dir`, relative path and bytes, sorted.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for sub in fs::read_dir(dir).unwrap() {
        let sub = sub.unwrap().path();
        for f in fs::read_dir(&sub).unwrap() {
            let f = f.unwrap().path();
            let rel = f.strip_prefix(dir).unwrap().display().to_string();
            out.push((rel, fs::read(&f).unwrap()));
        }
    }
    out.sort();
    out
}

/// The reports exercised for determinism. A tiny counting threshold forces
/// baby-step/giant-step at every place, so the random path actually varies.
fn run_all(dir: &Path, threads: &str, seed: &str) {
    let d = dir.to_str().unwrap();
    let common = ["--outdir", d, "--threads", threads, "--seed", seed, "--threshold", "2"];
    let jobs: [&[&str]; 5] = [
        &["lpoly", "--curve", "legendre5.curve", "--trunc", "6"],
        &["bias", "--curve", "legendre5.curve", "--kind", "a_weighted", "--d-max", "5"],
        &["drh", "--curve", "legendre5.curve", "--d-max", "5"],
        &["bsd", "--spec", "q = 7; a = [0, 0, 0, T, 1]", "--d-max", "4"],
        &["te", "--curve", "legendre5.curve", "--d-max", "5"],
    ];
    for job in jobs {
        let mut args = job.to_vec();
        args.extend_from_slice(&common);
        let (code, _, err) = call(&args);
        assert_eq!(code, 0, "{job:?}: {err}");
    }
}

#[test]
fn outputs_do_not_depend_on_threads_or_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    run_all(a.path(), "1", "0");
    run_all(b.path(), "3", "0");
    run_all(c.path(), "2", "12345");
    let first = snapshot(a.path());
    assert!(first.len() >= 5, "{:?}", first.iter().map(|f| &f.0).collect::<Vec<_>>());
    assert_eq!(first, snapshot(b.path()));
    assert_eq!(first, snapshot(c.path()));
}

#[test]
fn csv_headers_name_the_quantity() {
    let (code, out, _) = call(&["bias", "--curve", "legendre5.curve", "--kind", "mertens_II", "--d-max", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().contains("(1/2) sum tr M(v)^2/q_v"));
    let (code, out, _) = call(&["drh", "--curve", "legendre5.curve", "--d-max", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("d,x,lhs"), "{out}");
}

#[test]
fn unsupported_and_malformed_input() {
    assert_eq!(call(&["lpoly", "--spec", "q = 9; a = [0, 0, 0, T, 1]"]).0, 3);
    assert_eq!(call(&["lpoly", "--spec", "q = 5; a = [0, 0, 0, T]"]).0, 2);
    assert_eq!(call(&["bias", "--curve", "legendre5.curve", "--kind", "nope"]).0, 2);
    assert_eq!(call(&["lpoly", "--curve", "/nonexistent/x.curve"]).0, 1);
}
