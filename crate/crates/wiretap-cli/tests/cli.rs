//! End-to-end runs of the `wiretap` binary: exit codes, output formats and
//! output files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../wiretap-core/fixtures/channels").join(name).display().to_string()
}

fn wiretap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wiretap")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn region_eval_prints_constraints_and_vertices() {
    let o = wiretap(&["region", "eval-inner", "--channel", &fixture("bsc_cascade.toml"), "--aux", &fixture("aux_layers.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("kind,Rp1,Rs1,Rp2,Rs2,rhs\n"));
    assert!(out.lines().any(|l| l.starts_with("constraint,")));
    assert!(out.lines().any(|l| l.starts_with("vertex,")));
}

#[test]
fn gauss_eval_with_corollary_in_pretty_format() {
    let o = wiretap(&[
        "gauss", "eval", "--channel", &fixture("gauss_scalar.toml"), "--split", &fixture("split_scalar.toml"), "--corollary", "cor6", "--format",
        "pretty",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("----"));
}

#[test]
fn degraded_check_exit_codes() {
    assert_eq!(wiretap(&["gauss", "degraded-check", "--channel", &fixture("gain.toml")]).status.code(), Some(0));
    let o = wiretap(&["gauss", "degraded-check", "--channel", &fixture("product.toml")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("violation:"));
    let o = wiretap(&["gauss", "degraded-check", "--channel", &fixture("gauss_indefinite.toml")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(wiretap(&["region", "eval-inner", "--channel", &fixture("missing.toml"), "--aux", &fixture("aux_layers.toml")]).status.code(), Some(2));
    assert_eq!(wiretap(&["fisher", "lemmas", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(wiretap(&["fisher", "debruijn", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(wiretap(&["gauss", "eval", "--channel", &fixture("gauss_scalar.toml"), "--split", &fixture("split_scalar.toml"), "--order", "13"]).status.code(), Some(2));
    // a discrete channel where a Gaussian one is required
    assert_eq!(wiretap(&["gauss", "dpc-check", "--channel", &fixture("identity.toml")]).status.code(), Some(2));
}

#[test]
fn unattainable_tolerance_is_a_violation() {
    let o = wiretap(&["fisher", "lemmas", "--budget", "6", "--tol", "1e-300"]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    let o = wiretap(&["fisher", "debruijn", "--budget", "3", "--mixture-tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("wiretap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let base = ["gauss", "sweep", "--channel", &fixture("gauss_mimo.toml"), "--seed", "3", "--budget", "10"];
    let to_stdout = wiretap(&base);
    let mut with_file = base.to_vec();
    let p = path.display().to_string();
    with_file.extend(["--out", &p]);
    let o = wiretap(&with_file);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seeds_change_sweeps() {
    let run = |seed: &str| wiretap(&["region", "sweep", "--channel", &fixture("bsc_cascade.toml"), "--seed", seed, "--budget", "20"]).stdout;
    assert_ne!(run("1"), run("2"));
}
