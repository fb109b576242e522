use std::process::Command;

fn sqflab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sqflab"))
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = sqflab().args(["verify", "--suite", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = sqflab().args(["scan", "--kind", "variance"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identities_suite_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let st = sqflab()
            .args(["--threads", "4", "verify", "--suite", "identities", "--seed", "11", "--out"])
            .arg(p)
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(0));
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check_id,params,lhs,rhs,tol,mode,pass"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 200, "{} rows", rows.len());
    assert!(rows.iter().any(|r| r.starts_with("dispersion.developed_square")));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn scan_variance_csv_and_skip_warning() {
    let out = sqflab()
        .args(["scan", "--kind", "variance", "--x", "100000", "--q", "5000,100,200000,1000", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let qs: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(qs, ["100", "1000", "5000"]);
    assert!(String::from_utf8(out.stderr).unwrap().contains("q=200000"));
}

#[test]
fn scan_json_and_exponent_range() {
    let out = sqflab()
        .args(["scan", "--kind", "croft", "--x", "20000", "--q-exp", "0.5:0.7:0.1", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_start().starts_with('['));
    assert_eq!(text.matches("\"kind\": \"croft\"").count(), 3);
    assert!(text.contains("\"main_term\": null"));
}

#[test]
fn correlation_with_negative_multiplier() {
    let out = sqflab().args(["scan", "--kind", "correlation", "--x", "200000", "--q", "20011", "--m", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "-1");
    assert!(row[5].starts_with('-'));
}
