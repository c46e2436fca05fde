use std::process::{Command, Output};

fn iquantum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iquantum")).args(args).env("IQUANTUM_CACHE_DIR", std::env::temp_dir().join("iquantum-cli-tests")).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reduce_bkl_commutator_is_zero() {
    let o = iquantum(&["reduce", "--cartan", "a1xa1-swap", "--expr", "B2*B1 - B1*B2 - (q-q^-1)^-1*(k1-k2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn reduce_output_parses_back_to_itself() {
    let o = iquantum(&["reduce", "--cartan", "a2-swap", "--expr", "B1*B2*B1"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).trim().to_string();
    assert_ne!(first, "0");
    let again = iquantum(&["reduce", "--cartan", "a2-swap", "--expr", &first]);
    assert_eq!(stdout(&again).trim(), first);
    let diff = format!("B1*B2*B1 - ({first})");
    let zero = iquantum(&["reduce", "--cartan", "a2-swap", "--expr", &diff]);
    assert_eq!(stdout(&zero).trim(), "0");
}

#[test]
fn reduce_syntax_error_is_usage_error() {
    let o = iquantum(&["reduce", "--cartan", "a2-swap", "--expr", "B1 * * B2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 6"));
}

#[test]
fn check_cartan_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","cartan":[[2,-1],[0,2]],"symmetrizer":[1,1],"tau":[2,1]}"#).unwrap();
    let o = iquantum(&["check-cartan", "--cartan", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    let raw = iquantum::cartan::CartanDatum::from_json(&std::fs::read_to_string(&bad).unwrap()).unwrap();
    assert_eq!(err.trim(), raw.validate().join("\n"));
}

#[test]
fn check_cartan_accepts_file_and_preset() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("a2.json");
    std::fs::write(&good, r#"{"name":"a2","cartan":[[2,-1],[-1,2]],"symmetrizer":[1,1],"tau":[2,1]}"#).unwrap();
    assert_eq!(iquantum(&["check-cartan", "--cartan", good.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(iquantum(&["check-cartan", "--cartan", "a3-tau13"]).status.code(), Some(0));
}

#[test]
fn missing_file_is_usage_error() {
    assert_eq!(iquantum(&["check-cartan", "--cartan", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_is_usage_error() {
    assert_eq!(iquantum(&["verify", "--suite", "nope", "--cartan", "a2-swap"]).status.code(), Some(2));
}

#[test]
fn presets_lists_catalog() {
    let o = iquantum(&["presets"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in iquantum::cartan::preset_names() {
        assert!(s.contains(name));
    }
}

#[test]
fn verify_all_a2_passes_and_records_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a2.records");
    let o = iquantum(&["verify", "--suite", "all", "--cartan", "a2-swap", "--format", "records", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.lines().all(|l| !l.contains("status=fail")));
    let o = iquantum(&["verify", "--suite", "all", "--cartan", "a2-swap", "--format", "records", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), first);
}

#[test]
fn verify_fast_agrees_with_exact() {
    let exact = iquantum(&["verify", "--suite", "recursion", "--cartan", "a1aff-swap", "--format", "records", "--no-cache"]);
    let fast = iquantum(&["verify", "--suite", "recursion", "--cartan", "a1aff-swap", "--format", "records", "--method", "fast", "--no-cache"]);
    assert_eq!(exact.status.code(), Some(0));
    assert_eq!(fast.status.code(), Some(0));
    let cols = |o: &Output| stdout(o).lines().map(|l| l.split('\t').take(5).collect::<Vec<_>>().join("\t")).collect::<Vec<_>>();
    assert_eq!(cols(&exact), cols(&fast));
}

#[test]
fn verify_respects_e_filter() {
    let o = iquantum(&["verify", "--suite", "recursion", "--cartan", "a2-swap", "--e", "+1", "--format", "records", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(!s.is_empty());
    assert!(s.lines().all(|l| l.contains("e=+1")));
}
