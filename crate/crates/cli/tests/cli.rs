use std::collections::BTreeSet;
use std::process::{Command, Output};

fn pnveri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnveri"))
        .args(args)
        .env_remove("SEED")
        .output()
        .expect("run pnveri")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = pnveri(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_reports_witness_condition() {
    let v = json(&["check", "--p", "5", "--t", "8"]);
    assert_eq!(v["schema"], "pnveri/1");
    assert_eq!(v["verdict"]["classification"], "Proven");
    assert_eq!(v["verdict"]["detail"], "A.a");
    assert_eq!(v["verdict"]["group_attained"], 1);
}

#[test]
fn coulter_matthews_exponent_is_exceptional() {
    let v = json(&["check", "--p", "3", "--t", "14"]);
    assert_eq!(v["verdict"]["classification"], "Exceptional");
}

#[test]
fn listed_case_b_exponent_carries_note() {
    let v = json(&["check", "--p", "5", "--t", "76"]);
    assert_eq!(v["verdict"]["classification"], "Proven");
    let notes = v["verdict"]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().starts_with("table discrepancy")));
}

#[test]
fn scan_group_three_residual_for_five() {
    let v = json(&["scan", "--p", "5", "--t-max", "120", "--groups", "3"]);
    let rows = v["summary"]["case_a"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["group"], 3);
    assert_eq!(rows[0]["unresolved"], serde_json::json!([82]));
    assert_eq!(v["summary"]["case_b_unresolved"], serde_json::json!([16]));
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 118);
}

#[test]
fn scan_csv_is_stable_across_thread_counts() {
    let one = pnveri(&["scan", "--p", "7", "--t-max", "90", "--format", "csv", "--threads", "1"]);
    let four = pnveri(&["scan", "--p", "7", "--t-max", "90", "--format", "csv", "--threads", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let text = stdout(&one);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,t,case,classification,group_attained,proven_by,failed,skipped,notes");
    let ts: Vec<u64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ts, (3..=90).collect::<Vec<_>>());
    assert!(String::from_utf8_lossy(&one.stderr).contains("(A) group 1"));
}

#[test]
fn planar_pattern_for_fourteen() {
    let v = json(&["oracle", "planar", "--p", "3", "--t", "14", "--n", "1..5"]);
    let got: Vec<bool> =
        v["oracle"]["result"].as_array().unwrap().iter().map(|r| r["planar"].as_bool().unwrap()).collect();
    assert_eq!(got, [true, true, false, true, true]);
}

#[test]
fn pairs_match_census() {
    let pairs = json(&["oracle", "pairs", "--p", "3", "--t", "14"]);
    let census = json(&["census", "--p", "3", "--t", "14"]);
    assert_eq!(pairs["oracle"]["result"], census["census"]["N_t"]);
}

#[test]
fn census_case_b_point_at_infinity() {
    let o = pnveri(&["census", "--p", "3", "--t", "10", "--verify", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("N1 = 0, N2 = 1"), "{text}");
    assert!(text.contains("(1 : 1 : 0)  m_f = 9, m_g = 8"), "{text}");
    assert!(text.contains("taylor check: 1 points"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(pnveri(&["check", "--p", "4", "--t", "8"]).status.code(), Some(1));
    assert_eq!(pnveri(&["check", "--p", "5"]).status.code(), Some(1));
    assert_eq!(pnveri(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(pnveri(&["--help"]).status.code(), Some(0));
    assert_eq!(pnveri(&["oracle", "planar", "--p", "3", "--t", "14", "--n", "20"]).status.code(), Some(2));
    let capped = pnveri(&["check", "--p", "7", "--t", "152", "--groups", "2", "--strict"]);
    assert!(stdout(&capped).contains("Skipped"));
    assert_eq!(capped.status.code(), Some(2));
    assert_eq!(pnveri(&["check", "--p", "7", "--t", "152", "--groups", "2"]).status.code(), Some(0));
    assert_eq!(pnveri(&["selftest"]).status.code(), Some(0));
}

#[test]
fn config_file_and_seed_layering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "groups = [1]\nformat = \"json\"\n[caps]\noracle_field = 10\n").unwrap();
    let cfg = path.to_str().unwrap();

    let o = pnveri(&["--config", cfg, "oracle", "planar", "--p", "3", "--t", "4", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pnveri(&["--config", cfg, "--oracle-field", "100", "oracle", "planar", "--p", "3", "--t", "4", "--n", "3"]);
    assert!(o.status.success());

    let v: serde_json::Value =
        serde_json::from_slice(&pnveri(&["--config", cfg, "check", "--p", "5", "--t", "82"]).stdout).unwrap();
    let ids: BTreeSet<&str> =
        v["verdict"]["conditions"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["A.a", "A.d", "A.e", "A.f"].into());

    std::fs::write(&path, "colour = 1\n").unwrap();
    assert_eq!(pnveri(&["--config", cfg, "selftest"]).status.code(), Some(1));

    let bad_seed = Command::new(env!("CARGO_BIN_EXE_pnveri"))
        .args(["check", "--p", "5", "--t", "8"])
        .env("SEED", "nope")
        .output()
        .unwrap();
    assert_eq!(bad_seed.status.code(), Some(1));
}
