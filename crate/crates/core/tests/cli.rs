use std::process::Command;

fn prq(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_prq")).args(args).output().unwrap()
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = prq(&["--suite", "frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn resource_caps_are_reported() {
    let out = prq(&["--suite", "coleibniz", "--degree", "30"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn passing_suite_writes_json() {
    let path = std::env::temp_dir().join(format!("prq-report-{}.json", std::process::id()));
    let out = prq(&["--suite", "qlba-axioms", "--dim", "2", "--degree", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(report["suite"], "qlba-axioms");
    assert_eq!(report["config"]["dim"], 2);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert!(report["version"].is_string());
}

#[test]
fn compute_prints_canonical_forms() {
    let out = prq(&["compute", "coproduct", "01", "--order", "1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 ⊗ e0e1 + e0 ⊗ e1 + e0e1 ⊗ 1 + e1 ⊗ e0");
    let out = prq(&["compute", "delta", "0,7"]);
    assert_eq!(out.status.code(), Some(2));
}
