use std::process::{Command, Output};

use serde_json::Value;

fn trkr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trkr"))
        .args(args)
        .env_remove("TRKR_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn u0_report_matches_closed_form() {
    let o = trkr(&["homology", "--braid", "b=1;", "-N", "2", "--kmax", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("ε=1 i=0 free: τ⁻¹(q⁻¹+q); torsion: τ⁻¹ q³/(1−q²)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn compare_positive_and_negative_stabilization() {
    let o = trkr(&[
        "compare",
        "--braid-a",
        "b=1;",
        "--braid-b",
        "b=2; 1",
        "-N",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUAL\n"));
    let o = trkr(&[
        "compare",
        "--braid-a",
        "b=1;",
        "--braid-b",
        "b=2; -1",
        "-N",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("DIFFERENT\n"));
}

#[test]
fn json_is_deterministic_and_parses() {
    let args = [
        "--format", "json", "homology", "--braid", "b=2; 1", "-N", "1",
    ];
    let (a, b) = (trkr(&args), trkr(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["braid"], "b=2; 1");
    assert_eq!(v["N"], 1);
    for key in ["jmin", "jmax", "kmin", "kmax"] {
        assert!(v["window"][key].is_i64());
    }
    let comps = v["components"].as_array().unwrap();
    assert!(!comps.is_empty());
    for c in comps {
        assert!(c["free"].is_array() && c["torsion"].is_array());
    }
    assert_eq!(v["audits"]["structure_theorem"], true);
    // Round trip through a strict parser.
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again.as_bytes(), &a.stdout[..]);
}

#[test]
fn unknot_checks_pass() {
    for (m, n) in [(0, 1), (1, 1), (2, 1), (3, 1), (0, 2), (1, 2), (2, 2)] {
        let o = trkr(&["unknot-check", "-m", &m.to_string(), "-N", &n.to_string()]);
        assert_eq!(o.status.code(), Some(0), "m={m} N={n}: {}", stdout(&o));
        assert!(stdout(&o).contains("MATCH"));
    }
}

#[test]
fn checks_report_pass() {
    let o = trkr(&["stab-check", "--braid", "b=2; 1", "-N", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let o = trkr(&[
        "cone-check",
        "--braid",
        "b=1;",
        "-N",
        "1",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn oracle_agrees_with_direct_computation() {
    let o = trkr(&[
        "oracle",
        "--word",
        "b=3; t1 t2 t1",
        "-N",
        "1",
        "--compare",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["comparison"]["dims_match"], true);
    assert_eq!(v["comparison"]["generators_match"], true);
}

#[test]
fn moves_track_self_linking() {
    let o = trkr(&[
        "moves", "--braid", "b=2; 1", "--move", "stab-neg", "--move", "stab-pos",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "b=2; 1  (sl=-1)\n--stab-neg--> b=3; 1 -2  (sl=-3)\n--stab-pos--> b=4; 1 -2 3  (sl=-3)\n"
    );
}

#[test]
fn usage_errors_exit_one_with_diagnostics() {
    for args in [
        &["bogus"][..],
        &["homology", "--braid", "b=2; 5"],
        &["homology", "--braid", "b=1;", "-N", "0"],
    ] {
        let o = trkr(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let v: Value = serde_json::from_slice(&o.stderr).unwrap();
        assert!(v["error"]["message"].is_string());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_trkr"))
        .args(["sln", "--braid", "b=1;"])
        .env("TRKR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn audit_failure_exits_two() {
    // An a-window too low to see the module stabilize.
    let o = trkr(&["homology", "--braid", "b=2; -1", "-N", "1", "--jmax", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("window stable FAILED"));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_trkr"))
            .args([
                "--format",
                "json",
                "homology",
                "--braid",
                "b=3; 1 -2",
                "-N",
                "1",
            ])
            .env("TRKR_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("2"));
}
