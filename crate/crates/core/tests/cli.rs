use std::process::{Command, Output};

fn foregone(args: &[&str]) -> Output {
    foregone_env(args, None)
}

fn foregone_env(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_foregone"));
    cmd.args(args).env_remove("FOREGONE_SEED");
    if let Some(s) = seed {
        cmd.env("FOREGONE_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn list_names_every_scenario_with_its_citation() {
    let o = foregone(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["password (", "deniable/main (", "otp-table/known/fixed (", "unknown-goal/whereabouts ("] {
        assert!(text.contains(name), "missing {name}");
    }
    let v = json(&foregone(&["list", "--json"]));
    let arr = v.as_array().unwrap();
    assert!(arr.iter().all(|e| e["name"].is_string() && e["citation"].is_string()));
}

#[test]
fn run_matches_golden_reports() {
    let o = foregone(&["run", "password", "--check", "entailment", "--evidence", "strong", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/password_entailment_strong.json"));

    let o = foregone(&["run", "deniable", "--check", "counterexample", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/deniable_counterexample.json"));
}

#[test]
fn report_schema_fields() {
    let v = json(&foregone(&["run", "hybrid", "--check", "entailment", "--json"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = vec![
        "scenario", "check", "evidence", "verdict", "expected", "counterexample", "cells", "seeds", "budget", "citation",
    ];
    want.sort_unstable();
    let mut got = keys.clone();
    got.sort_unstable();
    assert_eq!(got, want);
    let cell = v["counterexample"].as_object().unwrap();
    let mut ck: Vec<&str> = cell.keys().map(String::as_str).collect();
    ck.sort_unstable();
    assert_eq!(ck, ["action", "expected_value", "got_value", "seed", "world"]);
}

#[test]
fn seeds_come_from_flag_or_environment() {
    let v = json(&foregone_env(&["run", "password", "--check", "demonstrability", "--json"], Some("5,9")));
    assert_eq!(v["seeds"], serde_json::json!([5, 9]));
    let v = json(&foregone_env(
        &["run", "password", "--check", "demonstrability", "--seeds", "2..4", "--json"],
        Some("5,9"),
    ));
    assert_eq!(v["seeds"], serde_json::json!([2, 3]));
    let v = json(&foregone(&["run", "password", "--check", "demonstrability", "--budget", "500", "--json"]));
    assert_eq!(v["budget"], 500);
    assert_eq!(v["seeds"].as_array().unwrap().len(), 16);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["run", "password", "--check", "entailment", "--seeds", ""][..],
        &["run", "nope", "--check", "entailment"],
        &["run", "password", "--check", "bogus"],
        &["run", "password", "--check", "entailment", "--evidence", "medium"],
        &["run", "password/other", "--check", "entailment"],
        &["audit", "--seeds", ""],
        &["frobnicate"],
    ] {
        assert_eq!(foregone(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(foregone_env(&["audit"], Some("")).status.code(), Some(2));
}

#[test]
fn overrides_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let overrides = dir.path().join("o.txt");
    std::fs::write(&overrides, "# disable the duress password\ndeniable.duress_enabled = 0\n").unwrap();
    let o = overrides.to_str().unwrap();

    // The counterexample disappears, so the verdict no longer matches.
    let r = foregone(&["run", "deniable", "--check", "counterexample", "--overrides", o, "--json"]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["verdict"], "Holds");

    let audit = foregone(&["audit", "--overrides", o]);
    assert_eq!(audit.status.code(), Some(1));
    assert!(stdout(&audit).contains("audit failed: deniable/main"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "deniable.nonsense = 1\n").unwrap();
    let r = foregone(&["run", "deniable", "--check", "entailment", "--overrides", bad.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));

    let pwd = dir.path().join("pwd.txt");
    std::fs::write(&pwd, "password.pwd = 0x6f70656e\npassword.m = 0x6e6f746573\n").unwrap();
    let out = dir.path().join("report.json");
    let r = foregone(&[
        "run",
        "password",
        "--check",
        "entailment",
        "--evidence",
        "strong",
        "--overrides",
        pwd.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "Holds");
}

#[test]
fn audit_passes_and_is_byte_identical() {
    let a = foregone(&["audit", "--json"]);
    let b = foregone(&["audit", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], true);
}

#[test]
fn otp_table_audit_covers_every_cell() {
    let o = foregone(&["run", "otp-table", "--check", "audit-all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for label in ["secret/R.k", "secret/fixed", "secret/sampled", "known/R.k", "known/fixed", "known/sampled"] {
        assert!(text.contains(&format!("- {label} ")), "missing {label}");
    }
    assert!(!text.contains("MISMATCH"));
}
