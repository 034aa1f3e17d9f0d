mod support;

use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use support::*;
use totally_real::expr::parse_manifold_expr;

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_totally-real"))
        .args(args)
        .output()
        .expect("spawn binary");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, stdout, _) = bin(&full);
    (code, serde_json::from_str(&stdout).expect("valid JSON"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_identity(e in manifold_expr()) {
        let text = e.to_string();
        let back = parse_manifold_expr(&text).map_err(|err| TestCaseError::fail(err.render()))?;
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["obstruct", "tri", "CP2"]).0, 0);
    assert_eq!(bin(&["obstruct", "tri", "CP2 *"]).0, 1);
    assert_eq!(bin(&["obstruct", "tri", "XY2"]).0, 1);
    assert_eq!(bin(&["frobnicate"]).0, 1);
    assert_eq!(bin(&["obstruct", "sideways", "CP2"]).0, 1);
    assert_eq!(bin(&["classify4", "RP3"]).0, 2);
    assert_eq!(bin(&["classes", "RP2 # CP2"]).0, 2);
    assert_eq!(bin(&["classes", "RP2 # CP1"]).0, 3);
    assert_eq!(bin(&["threshold", "--kind", "tri", "--dim", "1"]).0, 3);
    assert_eq!(bin(&["classes", "RP5", "--coeff", "z"]).0, 3);
    assert_eq!(bin(&["--help"]).0, 0);
}

#[test]
fn parse_errors_point_at_the_offset() {
    let (code, _, stderr) = bin(&["classify4", "RP4 # (RP2 *"]);
    assert_eq!(code, 1);
    assert!(stderr.contains('^'), "{stderr}");
    let (code, v) = json(&["classify4", "RP4 # (RP2 *"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["offset"], 12);
}

fn assert_envelope(v: &Value, query: &str) {
    let obj = v.as_object().unwrap();
    for key in [
        "query",
        "manifold",
        "dimension",
        "orientable",
        "closed",
        "result",
        "trace",
    ] {
        assert!(obj.contains_key(key), "missing {key} in {v}");
    }
    assert_eq!(v["query"], query);
    assert!(v["trace"].as_array().unwrap().iter().all(Value::is_string));
    assert!(v["result"].is_object());
}

#[test]
fn json_schema() {
    let (_, v) = json(&["classes", "CP2*RP2"]);
    assert_envelope(&v, "classes");
    assert_eq!(v["manifold"], "CP2*RP2");
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["orientable"], false);
    assert!(v["result"]["w"].is_string());
    assert!(v["result"]["w_components"]["w2"] == "a + x^2");

    let (_, v) = json(&["obstruct", "indep", "CP2*RP2*S1"]);
    assert_envelope(&v, "obstruct");
    let r = &v["result"];
    assert_eq!(r["kind"], "independent");
    assert_eq!(r["impossible"]["min"], 5);
    assert!(r["impossible"]["max"].is_null());
    assert_eq!(r["exists"]["max"], 4);
    assert!(r["unknown"].is_null());

    let (_, v) = json(&["classify4", "RP4"]);
    assert_envelope(&v, "classify4");
    let conds = v["result"]["conditions"].as_array().unwrap();
    assert_eq!(conds.len(), 7);
    for (i, c) in conds.iter().enumerate() {
        assert_eq!(c["index"], i + 1);
        assert!(["true", "false", "unknown"].contains(&c["value"].as_str().unwrap()));
        assert!(c["name"].is_string() && c["reason"].is_string());
    }

    let (_, v) = json(&["threshold", "--kind", "indep", "--dim", "7"]);
    assert_envelope(&v, "threshold");
    assert!(v["manifold"].is_null());
    assert_eq!(v["result"]["threshold"], 4);

    let (_, v) = json(&[
        "check-transversality",
        "--dim",
        "5",
        "--target",
        "7",
        "--kind",
        "tri",
    ]);
    assert_envelope(&v, "check-transversality");
    assert_eq!(v["result"]["applies"], true);
}

#[test]
fn text_and_json_agree() {
    for m in ["RP4", "RP4 # RP2*RP2", "T4", "CP2", "RP2*S2", "RP3*S1"] {
        let (_, text, _) = bin(&["classify4", m]);
        let (_, v) = json(&["classify4", m]);
        for c in v["result"]["conditions"].as_array().unwrap() {
            let line = format!("({}) {:<8}", c["index"], c["value"].as_str().unwrap());
            assert!(text.contains(&line), "{m}: {line:?} not in\n{text}");
        }
    }
    for m in ["CP2", "RP2*S2", "CP2*RP2*S1", "T3"] {
        for k in ["tri", "indep"] {
            let (_, text, _) = bin(&["obstruct", k, m]);
            let (_, v) = json(&["obstruct", k, m]);
            let r = &v["result"];
            for key in ["impossible", "exists"] {
                if r[key].is_null() {
                    continue;
                }
                let range = match (r[key]["min"].as_u64(), r[key]["max"].as_u64()) {
                    (Some(1), Some(hi)) => format!("N ≤ {hi}"),
                    (Some(lo), None) => format!("N ≥ {lo}"),
                    (Some(lo), Some(hi)) if lo == hi => format!("N = {lo}"),
                    (Some(lo), Some(hi)) => format!("{lo} ≤ N ≤ {hi}"),
                    _ => unreachable!(),
                };
                assert!(text.contains(&range), "{m} {k}: {range} not in\n{text}");
            }
        }
    }
}
