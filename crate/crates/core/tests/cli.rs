use std::process::Command;

use serde_json::Value;

fn jlcalc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jlcalc")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn documented_examples() {
    assert_eq!(jlcalc(&["dk-rank", "--n", "4", "--k", "1"]), (0, "4\n".into()));
    assert_eq!(jlcalc(&["lcs", "--word", "a1"]), (0, "1\n".into()));
    assert_eq!(jlcalc(&["reduce", "--word", "a1 a1^-1 b2"]), (0, "b2\n".into()));
    assert_eq!(jlcalc(&["classify-lk", &data("hopf_ilc.json")]), (0, "ILC\n".into()));
    assert_eq!(jlcalc(&["classify-lk", &data("lc_general.json")]), (0, "LC\n".into()));
}

fn strip_timings(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().expect("checks") {
        c.as_object_mut().expect("object").remove("elapsed_ms");
    }
    v
}

#[test]
fn verify_is_deterministic() {
    let (code, a) = jlcalc(&["--format", "json", "verify", "--suite", "all", "--seed", "7"]);
    assert_eq!(code, 0, "{a}");
    let (_, b) = jlcalc(&["--format", "json", "verify", "--suite", "all", "--seed", "7"]);
    let (a, b): (Value, Value) = (serde_json::from_str(&a).unwrap(), serde_json::from_str(&b).unwrap());
    assert_eq!(a["passed"], true);
    assert_eq!(a["checks"].as_array().unwrap().len(), 12);
    assert_eq!(strip_timings(a), strip_timings(b));
}

#[test]
fn domain_and_usage_errors() {
    assert_eq!(jlcalc(&["tau-levine-diagram", "--genus", "2", "--degree", "1", &data("levine_bracket.json")]).0, 1);
    assert_eq!(jlcalc(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(jlcalc(&["compose", "--cap", "99", "a.json", "b.json"]).0, 2);
    assert_eq!(jlcalc(&["classify-lk", "/no/such/file.json"]).0, 2);
}
