//! End-to-end tests of the `agctl` binary: output schemas, exit codes,
//! byte-level reproducibility, and manifest reruns.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn agctl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agctl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn agctl")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn oracle_prints_the_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "oracle", "--a", "1", "--T", "1", "--q0", "1", "--alpha", "1",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("kappa"), "{text}");
    // CG(1) at a = 1: exactly 3.
    assert!(text.contains(",3,"), "row missing the CG cost 3.0: {text}");

    let out = agctl(&["oracle", "--a", "0", "--T", "1", "--q0", "1"], dir.path());
    let text = stdout(&out);
    assert!(text.contains("1.19537"), "j0(0,1,1) row: {text}");
}

#[test]
fn oracle_rejects_nonpositive_horizon_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &["oracle", "--a", "1", "--T", "-1", "--q0", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('T'), "message must name T: {err}");
}

#[test]
fn estimate_runs_are_byte_identical_and_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "estimate",
        "--strategy",
        "cg:1",
        "--a",
        "1",
        "--paths",
        "2000",
        "--seed",
        "7",
        "--out",
        "run1",
    ];
    assert!(agctl(&args, dir.path()).status.success());
    let mut args2 = args;
    args2[args.len() - 1] = "run2";
    assert!(agctl(&args2, dir.path()).status.success());
    let a = fs::read(dir.path().join("run1/estimate.csv")).unwrap();
    let b = fs::read(dir.path().join("run2/estimate.csv")).unwrap();
    assert_eq!(a, b, "repeated runs must be byte-identical");

    let mut args3 = args.to_vec();
    args3.extend_from_slice(&["--workers", "1"]);
    args3[args.len() - 1] = "run3";
    assert!(agctl(&args3, dir.path()).status.success());
    let c = fs::read(dir.path().join("run3/estimate.csv")).unwrap();
    assert_eq!(a, c, "worker count must not change the bytes");
}

#[test]
fn estimate_matches_the_analytic_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "opt:0",
            "--a",
            "0",
            "--paths",
            "4000",
            "--seed",
            "11",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let cols: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
    let (mean, se) = (cols[1], cols[2]);
    assert!(
        (mean - 1.1953749864387921).abs() <= 3.0 * se + 0.02,
        "mean {mean} se {se}"
    );
}

#[test]
fn unknown_strategy_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &["estimate", "--strategy", "nope", "--a", "0", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn diverging_estimate_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "cg:0",
            "--a",
            "50",
            "--paths",
            "50",
            "--seed",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn regret_self_play_is_near_one_and_closed_form_matches() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "regret",
            "--strategy",
            "opt:2",
            "--a-grid",
            "2:2:1",
            "--paths",
            "4000",
            "--seed",
            "5",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("runs/regret.csv")).unwrap();
    let row: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let (mr, se, j0v) = (row[5], row[2], row[3]);
    assert!((mr - 1.0).abs() <= (3.0 * se + 0.05) / j0v, "self-MR {mr}");

    let out = agctl(
        &[
            "regret",
            "--strategy",
            "cg:0",
            "--a-grid",
            "-1:-1:1",
            "--paths",
            "6000",
            "--seed",
            "9",
            "--out",
            "r2",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("r2/regret.csv")).unwrap();
    let row: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // Closed-form ratio cg(0,-1)/j0(-1) = 1.0988.
    assert!(
        (row[5] - 1.0988).abs() < 0.05,
        "MR {} vs closed-form 1.0988",
        row[5]
    );
}

#[test]
fn regret_rejects_malformed_grids() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "regret",
            "--strategy",
            "cg:1",
            "--a-grid",
            "0:1:0",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_unknown_claim_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(&["verify", "no-such-claim", "--seed", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_decay_passes_and_writes_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(&["verify", "decay"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("decay: PASS"));
    let csv = fs::read_to_string(dir.path().join("runs/verify-decay.csv")).unwrap();
    assert!(csv.starts_with("label,a,observed,bound,se,pass"));
}

#[test]
fn manifest_rerun_reproduces_outputs_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "lqs",
            "--q0",
            "25",
            "--a",
            "2",
            "--paths",
            "500",
            "--seed",
            "21",
            "--out",
            "orig",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = agctl(
        &["rerun", "orig/estimate.manifest.json", "--out", "replay"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a = fs::read(dir.path().join("orig/estimate.csv")).unwrap();
    let b = fs::read(dir.path().join("replay/estimate.csv")).unwrap();
    assert_eq!(a, b, "rerun from manifest must be byte-identical");
}

#[test]
fn regret_manifest_rerun_reproduces_outputs_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "regret",
            "--strategy",
            "cg:1",
            "--a-grid",
            "-2:2:3",
            "--paths",
            "500",
            "--seed",
            "13",
            "--out",
            "orig",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = agctl(
        &["rerun", "orig/regret.manifest.json", "--out", "replay"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a = fs::read(dir.path().join("orig/regret.csv")).unwrap();
    let b = fs::read(dir.path().join("replay/regret.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn estimate_can_dump_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "cg:1",
            "--a",
            "0",
            "--paths",
            "100",
            "--seed",
            "5",
            "--dump-paths",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let dump = fs::read_to_string(dir.path().join("runs/path_0.csv")).unwrap();
    assert!(dump.starts_with("t,q,u,running_cost\n"), "{}", &dump[..40]);
    assert!(dir.path().join("runs/path_1.csv").exists());
}

#[test]
fn lqs_below_q_big_warns_but_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "lqs",
            "--a",
            "0",
            "--paths",
            "200",
            "--seed",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("q_big"), "expected a warning: {err}");
}

#[test]
fn hitting_and_sweep_emit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "hitting", "--a", "0", "--eps", "0.05", "--paths", "2000", "--seed", "4",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("up-first") && text.contains("down-first"),
        "{text}"
    );

    let out = agctl(
        &[
            "sweep",
            "--strategy",
            "cg:1",
            "--a-grid",
            "0:1:2",
            "--param",
            "gamma",
            "--values",
            "0.5,1.0",
            "--paths",
            "500",
            "--seed",
            "6",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("runs/sweep.csv")).unwrap();
    assert!(csv.lines().count() >= 5, "{csv}");
    assert!(csv.starts_with("gamma,a,mean"), "{csv}");
}

#[test]
fn zero_start_runs_from_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "zero-start",
            "--q0",
            "0",
            "--a",
            "1",
            "--paths",
            "300",
            "--seed",
            "44",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let mean: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!(mean.is_finite() && mean > 0.0);
}

#[test]
fn omitted_seed_is_drawn_and_printed() {
    let dir = tempfile::tempdir().unwrap();
    let out = agctl(
        &[
            "estimate",
            "--strategy",
            "cg:1",
            "--a",
            "0",
            "--paths",
            "100",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("seed:"), "{}", stdout(&out));
}
