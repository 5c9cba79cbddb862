// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_noncongruent"));
    c.env_remove("NONCONGRUENT_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_column(csv: &str) -> Vec<u64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn classify_exit_codes() {
    assert_eq!(run(&["classify", "17"]).status.code(), Some(0));
    assert_eq!(run(&["classify", "34"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "161"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "15"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "0"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "seventeen"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn classify_json() {
    let o = run(&["classify", "73", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "NonCongruentSha22");
    assert_eq!(v["s2"], 2);
    assert_eq!(v["d"], 73);
    assert_eq!(v["mu"], -7);
    assert_eq!(v["pairing_symbol"], -1);
}

#[test]
fn scan_odd_eligible() {
    let o = run(&["scan", "1", "100", "--odd", "--eligible"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.starts_with("n,k,eligible,strict,s2,h4_minus,h4_plus,d,mu,symbol,verdict,h4_oracle_agrees,tame_agrees\n")
    );
    assert_eq!(first_column(&text), vec![17, 41, 73, 89, 97]);
    let verdicts: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(10).unwrap()).collect();
    assert_eq!(
        verdicts,
        [
            "NonCongruentSha22",
            "CriterionFails",
            "NonCongruentSha22",
            "NonCongruentSha22",
            "NonCongruentSha22"
        ]
    );
}

#[test]
fn scan_even() {
    let text = stdout(&run(&["scan", "1", "200", "--even"]));
    let ns = first_column(&text);
    assert!(ns.contains(&2) && ns.contains(&34));
    assert!(ns.iter().all(|n| n % 8 == 2));
}

#[test]
fn scan_empty_range() {
    let o = run(&["scan", "50", "40"]);
    assert!(o.status.success());
    assert!(first_column(&stdout(&o)).is_empty());
}

#[test]
fn scan_json_lines() {
    let text = stdout(&run(&["scan", "1", "3000", "--strict", "--json"]));
    let rows: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(rows.iter().filter(|r| r["h4_oracle_agrees"] == true).count() > 20);
    for r in &rows {
        assert_eq!(r["strict"], true);
        // null when the classifier stopped before h4, as for s2 = 4
        assert_ne!(r["h4_oracle_agrees"], false);
        assert_eq!(r["tame_agrees"], true);
    }
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let one = run(&["scan", "1", "6000", "--jobs", "1"]).stdout;
    let three = run(&["scan", "1", "6000", "--jobs", "3"]).stdout;
    let env = bin()
        .args(["scan", "1", "6000", "--jobs", "1"])
        .env("NONCONGRUENT_JOBS", "5")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(one, three);
    assert_eq!(one, env);
    let bad = bin()
        .args(["scan", "1", "10"])
        .env("NONCONGRUENT_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn scan_resumes_from_checkpoint() {
    let dir = std::env::temp_dir().join(format!("noncongruent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ck = dir.join("ck");
    let full = run(&["scan", "1", "5000", "--checkpoint", ck.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&ck).unwrap().trim(), "5001");

    let head = run(&["scan", "1", "3072"]).stdout;
    std::fs::write(&ck, "3073\n").unwrap();
    let tail = run(&["scan", "1", "5000", "--from", ck.to_str().unwrap()]).stdout;
    assert_eq!([head, tail].concat(), full.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "rank-bridge-odd", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["first_counterexample"].is_null());
    assert_eq!(run(&["verify", "no-such-suite", "10"]).status.code(), Some(3));
}

#[test]
fn tame_and_classgroup() {
    let v: serde_json::Value = serde_json::from_slice(&run(&["tame", "-34"]).stdout).unwrap();
    assert_eq!((v["r2"].as_u64(), v["r4"].as_u64()), (Some(1), Some(1)));
    let v: serde_json::Value = serde_json::from_slice(&run(&["classgroup", "-68"]).stdout).unwrap();
    assert_eq!(v["order"], 4);
    assert_eq!(v["elementary_divisors"], serde_json::json!([4]));
    assert_eq!(run(&["classgroup", "-4620"]).status.code(), Some(3));
    assert_eq!(run(&["tame", "18"]).status.code(), Some(3));
}
