use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn gpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = args.to_vec();
    full.push("--json");
    let o = gpm(&full);
    (serde_json::from_str(&stdout(&o)).expect("valid JSON"), o.status.code().unwrap())
}

/// Every number and string leaf of the JSON outside `runtime_ms`.
fn leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::String(s) => out.push(s.clone()),
        Value::Array(items) => items.iter().for_each(|x| leaves(x, out)),
        Value::Object(o) => o.iter().filter(|(k, _)| *k != "runtime_ms").for_each(|(_, x)| leaves(x, out)),
        _ => {}
    }
}

fn assert_same_content(args: &[&str]) {
    let text = stdout(&gpm(args));
    let (v, _) = json(args);
    let mut found = Vec::new();
    leaves(&v, &mut found);
    for leaf in found {
        if leaf == "gpm-report/1" {
            continue;
        }
        assert!(text.contains(&leaf), "`{leaf}` missing from text output of {args:?}:\n{text}");
    }
}

#[test]
fn farkas_refutation_exits_zero() {
    let (v, code) = json(&["clr", "construct", "--model", "pathological", "--effect", "e-a1-a2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "gpm-report/1");
    assert_eq!(v["results"]["outcome"], "infeasible");
    assert_eq!(v["results"]["certificate"]["kind"], "farkas");
    assert_eq!(v["checks"][0]["passed"], true);
}

#[test]
fn failed_expectation_exits_one() {
    let o = gpm(&["check", "effect", "--model", "gbit", "--element", "e+a1", "--expect", "true"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
    assert!(stdout(&o).contains("separating_state"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gpm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gpm(&["reproduce", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(gpm(&["check", "effect", "--model", "gbit", "--element", "a9"]).status.code(), Some(2));
    assert_eq!(gpm(&["check", "effect", "--model", "nonsense", "--element", "e"]).status.code(), Some(2));
    assert_eq!(gpm(&["check", "state", "--model", "gbit", "--state", "[1, 2"]).status.code(), Some(2));
}

#[test]
fn reproduce_named_scenarios() {
    let (v, code) = json(&["reproduce", "spekkens-table"]);
    assert_eq!(code, 0);
    let ratios = v["results"]["ratios"].as_array().unwrap();
    assert_eq!(ratios.len(), 6);
    assert_eq!(ratios[0], serde_json::json!(["1", "0", "1/2", "1/2", "1/2", "1/2"]));

    let (v, code) = json(&["reproduce", "lg-manhattan-3"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["actual"], "3");
    assert!(v["results"]["state"].as_array().unwrap().iter().all(Value::is_string));
}

#[test]
fn reproduce_all_is_deterministic() {
    let strip = |mut v: Value| {
        for r in v["reports"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("runtime_ms");
        }
        v
    };
    let (a, code) = json(&["reproduce", "all"]);
    assert_eq!(code, 0);
    assert_eq!(a["reports"].as_array().unwrap().len(), 10);
    let (b, _) = json(&["reproduce", "all"]);
    assert_eq!(strip(a.clone()), strip(b));
    // parallel runs keep the fixed order and match single runs
    let titles: Vec<&str> = a["reports"].as_array().unwrap().iter().map(|r| r["title"].as_str().unwrap()).collect();
    assert_eq!(titles[0], "spekkens-table");
    assert_eq!(titles[9], "section-transport");
    let (single, _) = json(&["reproduce", "trislit-interference"]);
    let mut single = single;
    single.as_object_mut().unwrap().remove("runtime_ms");
    assert_eq!(strip(a)["reports"][6], single);
}

#[test]
fn text_and_json_carry_the_same_values() {
    assert_same_content(&["reproduce", "spekkens-table"]);
    assert_same_content(&["reproduce", "pathological-no-clr"]);
    assert_same_content(&["clr", "construct", "--model", "spekkens", "--effect", "a-2"]);
    assert_same_content(&["seq", "lg-bound", "--model", "manhattan:3", "--a", "a+1", "--a-prime", "[1,1,1]", "--b", "a+2"]);
    assert_same_content(&["sorkin", "decompose", "--slits", "sqrt-counterexample"]);
}

#[test]
fn file_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::File::create(&model)
        .unwrap()
        .write_all(br#"{"type": "dichotomic", "d": 2, "norm": "manhattan"}"#)
        .unwrap();
    let effect = dir.path().join("effect.json");
    std::fs::write(&effect, r#"["1/2", "1/2", "0"]"#).unwrap();
    let m = format!("@{}", model.display());
    let f = format!("@{}", effect.display());
    let (v, code) = json(&["clr", "construct", "--model", &m, "--effect", &f]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["outcome"], "map");
    assert_eq!(gpm(&["clr", "construct", "--model", "@/no/such/file", "--effect", "e"]).status.code(), Some(2));
}

#[test]
fn aliases_resolve_to_coordinates() {
    let (v, _) = json(&["check", "effect", "--model", "pathological", "--element", "e-a1-a2"]);
    assert_eq!(v["results"]["element"], serde_json::json!(["0", "0", "1/2", "1/2"]));
    let (v, _) = json(&["check", "effect", "--model", "spekkens", "--element", "1/2*a+1+1/2*a-1"]);
    assert_eq!(v["results"]["element"], serde_json::json!(["1/2", "0", "0", "0"]));
    assert_eq!(v["results"]["effect"]["holds"], true);
}

#[test]
fn catalog_listing() {
    let (v, code) = json(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"].as_object().unwrap().len(), 10);
    let (v, code) = json(&["catalog", "show", "quantum:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn slit_json_with_model() {
    // two classical slits that never interfere
    let slits = r#"{"slits": 2, "maps": {
        "{1}": {"matrix": [[1,0],[0,0]]},
        "{2}": {"matrix": [[0,0],[0,1]]},
        "{1,2}": {"matrix": [[1,0],[0,1]]}}}"#;
    let (v, code) = json(&["sorkin", "max-order", "--slits", slits, "--model", "classical:2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["max_order"], 1);
}
