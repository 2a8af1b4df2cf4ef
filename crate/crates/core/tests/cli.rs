//! End-to-end CLI runs: generate, solve, verify, corrupt, bench.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plancon"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("plancon-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_is_deterministic() {
    let a = tmp("det-a.json");
    let b = tmp("det-b.json");
    for out in [&a, &b] {
        let st = bin()
            .args(["gen", "snug-chain", "--n", "6", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(st.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn solve_cap_and_verify_round_trip() {
    let inst = tmp("cap.json");
    let report = tmp("cap-report.json");
    assert!(bin()
        .args(["gen", "snug-chain", "--n", "6", "--out"])
        .arg(&inst)
        .status()
        .unwrap()
        .success());
    let st = bin()
        .args(["solve-cap", "--eps", "1/2", "--input"])
        .arg(&inst)
        .arg("--report")
        .arg(&report)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["schema"], 1);
    assert_eq!(rep["result"]["cost"], 1);
    // verify the solution then a corrupted one
    let sol = tmp("cap-sol.json");
    std::fs::write(&sol, format!("{{\"links\": {}}}", rep["result"]["edges"])).unwrap();
    assert_eq!(
        bin().args(["verify", "--input"]).arg(&inst).arg("--solution").arg(&sol).status().unwrap().code(),
        Some(0)
    );
    let bad = tmp("cap-bad.json");
    std::fs::write(&bad, "{\"links\": []}").unwrap();
    let out = bin()
        .args(["verify", "--input"])
        .arg(&inst)
        .arg("--solution")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cut"));
}

#[test]
fn solve_ecss_runs() {
    let inst = tmp("ecss.json");
    assert!(bin()
        .args(["gen", "random-kec", "--n", "9", "--k", "2", "--seed", "1", "--out"])
        .arg(&inst)
        .status()
        .unwrap()
        .success());
    let out = bin()
        .args(["solve-ecss", "--eps", "1/2", "--input"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cost"));
}

#[test]
fn bench_emits_csv_header() {
    let out = bin()
        .args(["bench", "--problem", "cap", "--n", "8", "--seeds", "1", "--eps", "1/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("instance_id,n,m,links,k,eps,ptas_cost,oracle_cost,ratio,millis"));
    assert!(text.lines().count() >= 2);
}


#[test]
fn hardness_generation_and_solve() {
    let formula = tmp("f.cnf");
    std::fs::write(&formula, "p cnf 1 1\n1 -1 0\n").unwrap();
    let inst = tmp("hard.json");
    let out = bin()
        .args(["gen", "hardness", "--k", "2", "--formula"])
        .arg(&formula)
        .arg("--out")
        .arg(&inst)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("target cardinality 13"));
    let out = bin()
        .args(["solve-cap", "--eps", "1", "--input"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("cost 13 "));
}

#[test]
fn reports_reproduce_byte_identically_except_wall_clock() {
    let inst = tmp("repro.json");
    assert!(bin()
        .args(["gen", "random-cap", "--n", "9", "--k", "2", "--seed", "5", "--out"])
        .arg(&inst)
        .status()
        .unwrap()
        .success());
    let mut reports = Vec::new();
    for name in ["repro-a.json", "repro-b.json"] {
        let rep = tmp(name);
        assert!(bin()
            .args(["solve-cap", "--eps", "1/2", "--input"])
            .arg(&inst)
            .arg("--report")
            .arg(&rep)
            .status()
            .unwrap()
            .success());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("wall_clock_ms");
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().args(["solve-cap"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
