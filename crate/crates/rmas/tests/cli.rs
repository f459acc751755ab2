//! End-to-end tests of the command-line surface.

use std::io::Write;
use std::process::{Command, Stdio};

fn rmas() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmas"))
}

fn write_fixture(dir: &std::path::Path, name: &str) -> std::path::PathBuf {
    let out = dir.join(format!("{name}.rmas"));
    let status = rmas()
        .args(["gen", "--kind", "fixture", "--name", name, "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    out
}

#[test]
fn solve_combined_json_on_two_cycle() {
    let dir = std::env::temp_dir().join("rmas-cli-solve");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_fixture(&dir, "two-cycle");
    let output = rmas()
        .args(["solve", "--alg", "combined", "--json", "--in"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["algorithm"], "combined");
    assert_eq!(report["value"], 1.0);
    assert_eq!(report["W"], 2.0);
    assert_eq!(report["labeling"], serde_json::json!([1, 2]));
    assert!(report["timings_ms"].is_object());
}

#[test]
fn eval_prints_value() {
    let dir = std::env::temp_dir().join("rmas-cli-eval");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_fixture(&dir, "single-edge");
    let output = rmas()
        .args(["eval", "--labels", "1 2", "--in"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "3");

    // infeasible labeling is a domain error: exit 1
    let output = rmas()
        .args(["eval", "--labels", "5 2", "--in"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn exact_over_cap_exits_one() {
    let dir = std::env::temp_dir().join("rmas-cli-cap");
    std::fs::create_dir_all(&dir).unwrap();
    let big = dir.join("big.rmas");
    let status = rmas()
        .args(["gen", "--kind", "mas", "--nodes", "40", "--edges", "60", "--out"])
        .arg(&big)
        .status()
        .unwrap();
    assert!(status.success());
    let output = rmas()
        .args(["solve", "--alg", "exact", "--json", "--in"])
        .arg(&big)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_slice(&output.stderr).expect("machine-readable error");
    assert_eq!(err["error"], "domain");
}

#[test]
fn usage_error_exits_two() {
    let output = rmas().args(["solve", "--alg", "nonsense"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = rmas().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn reads_stdin_when_no_input_flag() {
    let mut child = rmas()
        .args(["solve", "--alg", "simple"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"nodes 2\nlabels 0 1\nlabels 1 2\nedge 0 1 3\n")
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("value 3"), "{text}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = std::env::temp_dir().join("rmas-cli-det");
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let csv = dir.join(format!("ratio-{run}.csv"));
        let status = rmas()
            .args(["bench", "ratio", "--count", "10", "--seed", "42", "--out"])
            .arg(&csv)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(String::from_utf8_lossy(&outputs[0]).starts_with("id,n,m,W,opt,lp,simple,round,combined,ratio"));

    let a = rmas()
        .args(["solve", "--alg", "simple-rand", "--seed", "7", "--in"])
        .arg(write_fixture(&dir, "two-cycle"))
        .output()
        .unwrap();
    let b = rmas()
        .args(["solve", "--alg", "simple-rand", "--seed", "7", "--in"])
        .arg(dir.join("two-cycle.rmas"))
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_reports_all_checks() {
    let dir = std::env::temp_dir().join("rmas-cli-verify");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_fixture(&dir, "triangle");
    let output = rmas().args(["verify", "--in"]).arg(&path).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    for check in ["filtering-soundness", "lp-sandwich", "bound-chain"] {
        assert!(text.contains(&format!("PASS {check}")), "{text}");
    }
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = std::env::temp_dir().join("rmas-cli-gen");
    std::fs::create_dir_all(&dir).unwrap();
    for kind in ["random", "mas", "khandekar", "dag"] {
        let path = dir.join(format!("{kind}.rmas"));
        let status = rmas()
            .args(["gen", "--kind", kind, "--nodes", "5", "--edges", "6", "--seed", "3", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success(), "{kind}");
        let output = rmas()
            .args(["solve", "--alg", "combined", "--json", "--in"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(output.status.success(), "{kind}");
        let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        assert!(report["value"].as_f64().unwrap() >= report["guarantee"].as_f64().unwrap() - 1e-6);
    }
}

#[test]
fn lp_subcommand_prints_value_and_dump() {
    let dir = std::env::temp_dir().join("rmas-cli-lp");
    std::fs::create_dir_all(&dir).unwrap();
    let path = write_fixture(&dir, "single-edge");
    let output = rmas()
        .args(["lp", "--dump-solution", "--in"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.starts_with("lp 3"), "{text}");
    assert!(text.contains("x[0](1)"), "{text}");
}
