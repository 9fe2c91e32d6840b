use std::path::PathBuf;
use std::process::{Command, Output};

use crn_core::algebra::{parse_poly, Namespace, Poly};
use crn_core::model::parse_crn;
use serde_json::Value;

fn network(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../networks").join(name)
}

fn crn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crn")).args(args).env_remove("CRN_COLOR").output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = crn(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).expect("valid JSON")
}

fn main_ns() -> (Namespace, Namespace) {
    let text = std::fs::read_to_string(network("main.crn")).unwrap();
    let c = parse_crn(&text).unwrap();
    let short = Namespace::new((1..=12).map(|i| format!("k{i}")).collect(), (1..=9).map(|i| format!("c{i}")).collect());
    (c.namespace(), short)
}

#[test]
fn minimal_psemiflows_of_the_main_example() {
    let main = network("main.crn");
    let v = json(&["semiflows", main.to_str().unwrap(), "--minimal", "--format", "json"]);
    let minimal: Vec<&str> =
        v["minimal_psemiflows"].as_array().unwrap().iter().map(|e| e["text"].as_str().unwrap()).collect();
    for w in ["S1 + S4 + S5 + S6", "S8 + S9", "S2 + S4 + S6 + S7 + S9"] {
        assert!(minimal.contains(&w), "{w} missing from {minimal:?}");
    }
    assert_eq!(minimal.len(), 4);
    assert!(v.get("strictly_positive").is_none());
}

#[test]
fn noncut_elimination_json() {
    let main = network("main.crn");
    let v = json(&["eliminate", main.to_str().unwrap(), "--subset", "S4,S5,S6,S7,S9", "--format", "json"]);
    let comp = &v["components"][0];
    assert_eq!(comp["kind"], "noncut");
    let (ns, short) = main_ns();
    let sigma = comp["sigma"].as_object().unwrap();
    assert_eq!(sigma.len(), 6);
    let bracket = "(k1*k4*k5 + k2*k3*k7 + k1*k5*k7*c2 + k3*k5*k7*c3)";
    let expected = [
        ("S7", format!("k9*(k11+k12)*{bracket}*c1*c2*c3")),
        ("S9", format!("k9*k10*{bracket}*c1*c2*c3*c8")),
        ("S6", format!("k10*k12*{bracket}*c1*c2*c3*c8")),
    ];
    for (key, want) in expected {
        let got = parse_poly(sigma[key].as_str().unwrap(), &ns).unwrap();
        assert_eq!(got, parse_poly(&want, &short).unwrap(), "sigma_{key}");
    }
    let star = parse_poly(sigma["*"].as_str().unwrap(), &ns).unwrap();
    assert!(star.is_s_positive());
}

#[test]
fn degree_two_species_is_rejected() {
    let intro = network("intro.crn");
    let out = crn(&["eliminate", intro.to_str().unwrap(), "--subset", "B"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree 2"));
}

#[test]
fn incompatible_component_prints_certificate() {
    let dir = std::env::temp_dir().join(format!("crn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("inflow.crn");
    std::fs::write(&file, "r1: A <=> B\nr2: C -> A\n").unwrap();
    let out = crn(&["eliminate", file.to_str().unwrap(), "--subset", "A,B", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["components"][0]["kind"], "incompatible");
    assert!(v["components"][0]["certificate"]["lambda"].is_array());
}

#[test]
fn configuration_errors_exit_with_two() {
    let main = network("main.crn");
    let m = main.to_str().unwrap();
    assert_eq!(crn(&["parse", "no/such/file.crn"]).status.code(), Some(2));
    assert_eq!(crn(&["classify", m, "--subset", "S1,X"]).status.code(), Some(2));
    assert_eq!(crn(&["eliminate", m, "--subset", "S1,S4,S5,S6", "--total", "w=S1,S4"]).status.code(), Some(2));
    assert_eq!(crn(&["parse", m, "--format", "latex"]).status.code(), Some(2));
    assert_eq!(crn(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let main = network("main.crn");
    let args = ["reduce", main.to_str().unwrap(), "--subset", "all-noninteracting", "--format", "json"];
    assert_eq!(run_ok(&args), run_ok(&args));
    let args = ["validate", main.to_str().unwrap(), "--subset", "S1,S4,S5,S6,S8,S9", "--seed", "17"];
    assert_eq!(run_ok(&args), run_ok(&args));
}

#[test]
fn reduce_json_round_trips_through_the_parser() {
    let main = network("main.crn");
    let v = json(&["reduce", main.to_str().unwrap(), "--subset", "S1,S4,S5,S6,S8,S9", "--total", "T=S8,S9", "--format", "json"]);
    assert_eq!(v["equation_count"], 3);
    let (mut ns, _) = main_ns();
    // explicit bindings are registered before generated names
    for name in ["T", "w1", "w2", "w3"] {
        ns.add_total(name).unwrap();
    }
    let mut texts: Vec<&str> = Vec::new();
    for e in v["equations"].as_array().unwrap().iter().chain(v["conservation"].as_array().unwrap()) {
        texts.push(e["numerator"].as_str().unwrap());
        texts.push(e["denominator"].as_str().unwrap());
    }
    for f in v["eliminated"].as_object().unwrap().values() {
        texts.push(f["num"].as_str().unwrap());
        texts.push(f["den"].as_str().unwrap());
    }
    for t in texts {
        let p: Poly = parse_poly(t, &ns).unwrap();
        assert_eq!(p.display(&ns).to_string(), t);
    }
    let redundant: Vec<&str> = v["equations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["redundant"] == true)
        .map(|e| e["species"].as_str().unwrap())
        .collect();
    assert_eq!(redundant, ["S2", "S3"]);
}

#[test]
fn validation_reports_seed_and_passes() {
    let main = network("main.crn");
    let v = json(&["validate", main.to_str().unwrap(), "--subset", "S1,S4,S5,S6,S8,S9", "--seed", "5", "--format", "json"]);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["passed"], true);
    assert!(v["eliminated_residuals"].as_object().unwrap().values().all(|r| r == "0"));
    let fixed = json(&[
        "validate", main.to_str().unwrap(), "--subset", "S1,S4,S5,S6,S8,S9", "--seed", "5",
        "--assign", "k_r1=3/2", "--format", "json",
    ]);
    assert_eq!(fixed["assignment"]["k_r1"], "3/2");
}

#[test]
fn color_only_in_text_mode() {
    let main = network("main.crn");
    let args = ["semiflows", main.to_str().unwrap()];
    let colored = Command::new(env!("CARGO_BIN_EXE_crn")).args(args).env("CRN_COLOR", "1").output().unwrap();
    assert!(String::from_utf8_lossy(&colored.stdout).contains('\x1b'));
    let plain = run_ok(&args);
    assert!(!plain.contains('\x1b'));
    let json_out = Command::new(env!("CARGO_BIN_EXE_crn"))
        .args(["semiflows", main.to_str().unwrap(), "--format", "json"])
        .env("CRN_COLOR", "1")
        .output()
        .unwrap();
    assert!(!String::from_utf8_lossy(&json_out.stdout).contains('\x1b'));
}

#[test]
fn graph_writes_dot_file() {
    let dir = std::env::temp_dir().join(format!("crn-cli-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("g.dot");
    let main = network("main.crn");
    let text = run_ok(&["graph", main.to_str().unwrap(), "--subset", "S8,S9", "--dot", dot.to_str().unwrap()]);
    assert!(text.contains("S8 -> S9 [r10]"));
    let written = std::fs::read_to_string(&dot).unwrap();
    assert!(written.starts_with("digraph"));
    let elim = run_ok(&["graph", main.to_str().unwrap(), "--subset", "S8,S9", "--elimination", "--format", "dot"]);
    assert!(elim.contains("k_r10*c_S7"));
}

#[test]
fn latex_and_classify_outputs() {
    let main = network("main.crn");
    let tex = run_ok(&["reduce", main.to_str().unwrap(), "--subset", "S1,S4,S5,S6,S8,S9", "--format", "latex"]);
    assert!(tex.starts_with("\\begin{align*}"));
    assert_eq!(tex.matches("&=").count(), 3);
    let v = json(&["classify", main.to_str().unwrap(), "--subset", "all-noninteracting", "--format", "json"]);
    let first = &v["maximal_non_interacting"][0];
    assert_eq!(first["subset"], serde_json::json!(["S1", "S4", "S5", "S6", "S8", "S9"]));
    assert_eq!(first["cut"], true);
    let parsed = run_ok(&["parse", main.to_str().unwrap()]);
    assert!(parsed.starts_with("species: S1 S2"));
}
