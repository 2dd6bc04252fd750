use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modal-nbhd"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn parse_prints_canonical_form() {
    let out = run(&["parse", "--formula", "~[1]~p -> ([2] q & true)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let again = run(&["parse", "--formula", text.trim()]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn syntax_error_is_usage_error() {
    let out = run(&["parse", "--formula", "[1] (p ->"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));
    let out = run(&["parse", "--formula", "[3] p"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(run(&["verify", "--lemma", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn improper_frame_refutes_d() {
    let out = run(&[
        "valid",
        "--frame",
        &data("improper.json"),
        "--formula",
        "[1] p -> <1> p",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["counterexample"]["world"], "x");
}

#[test]
fn valid_formula_exits_zero() {
    let out = run(&["valid", "--frame", &data("reflexive.json"), "--formula", "[1] p -> p"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn mc_reads_both_formats() {
    let out = run(&["mc", "--model", &data("chain.json"), "--formula", "[1] p", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["semantics"], "kripke");
    assert_eq!(v["true_at"], serde_json::json!(["a", "b", "c"]));

    let out = run(&[
        "mc",
        "--model",
        &data("reflexive.json"),
        "--formula",
        "[1] p",
        "--world",
        "v",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "mc",
        "--model",
        &data("reflexive.json"),
        "--formula",
        "[1] p",
        "--world",
        "u",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["semantics"], "neighborhood");
}

#[test]
fn nof_output_agrees_with_kripke_model() {
    let out = run(&["nof", "--frame", &data("chain.json")]);
    assert_eq!(out.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("modal-nbhd-nof-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nof.json");
    std::fs::write(&path, &out.stdout).unwrap();
    for phi in ["[1] p", "<2>[1] ~p", "[1][1] p -> [2] p"] {
        let k = json(&run(&[
            "mc",
            "--model",
            &data("chain.json"),
            "--formula",
            phi,
            "--json",
        ]));
        let n = json(&run(&[
            "mc",
            "--model",
            path.to_str().unwrap(),
            "--formula",
            phi,
            "--json",
        ]));
        assert_eq!(k["true_at"], n["true_at"], "{phi}");
    }
}

#[test]
fn char_reports_both_views() {
    let v = json(&run(&["char", "--frame", &data("improper.json"), "--json"]));
    let m = &v["modalities"]["1"];
    assert_eq!(m["d"], false);
    assert_eq!(m["brute_force"]["d"], false);
    assert_eq!(m["t"], m["brute_force"]["t"]);
    assert_eq!(m["four"], m["brute_force"]["four"]);
}

#[test]
fn product_of_points() {
    let out = run(&[
        "product",
        "--frame",
        &data("point.json"),
        "--frame",
        &data("point.json"),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["worlds"], serde_json::json!(["(o,o)"]));
    assert_eq!(v["base"]["1"]["(o,o)"], serde_json::json!([["(o,o)"]]));
    assert_eq!(v["base"]["2"]["(o,o)"], serde_json::json!([["(o,o)"]]));
    let one = run(&["product", "--frame", &data("point.json")]);
    assert_eq!(one.status.code(), Some(2));
}

#[test]
fn tree_window_export() {
    let v = json(&run(&[
        "tree",
        "--kind",
        "in",
        "--branching",
        "2",
        "--depth",
        "2",
        "--json",
    ]));
    assert_eq!(v["worlds"].as_array().unwrap().len(), 7);
    assert_eq!(v["rel"]["1"].as_array().unwrap().len(), 6);
    let n = json(&run(&["tree", "--kind", "rt", "--depth", "1", "--nof", "--json"]));
    assert_eq!(n["base"]["1"].as_object().unwrap().len(), 3);
}

#[test]
fn verify_chain_json() {
    let out = run(&[
        "verify",
        "--lemma",
        "chain",
        "--kind",
        "rt",
        "--branching",
        "2",
        "--depth",
        "4",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lemma"], "chain");
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["depth"], 4);
    assert!(v.get("millis").is_none());
    let timed = json(&run(&[
        "verify", "--lemma", "chain", "--kind", "rt", "--depth", "2", "--json", "--timing",
    ]));
    assert!(timed["millis"].is_u64());
}

#[test]
fn verify_needs_its_kinds() {
    let out = run(&["verify", "--lemma", "g-morphism", "--kind1", "in"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_other_lemmas() {
    for args in [
        &["verify", "--lemma", "fractal", "--kind", "it", "--depth", "3"][..],
        &["verify", "--lemma", "ff-morphism", "--kind", "rn", "--depth", "3"],
        &[
            "verify",
            "--lemma",
            "g-morphism",
            "--kind1",
            "in",
            "--kind2",
            "rt",
            "--depth",
            "3",
        ],
        &["verify", "--lemma", "axiom-evidence", "--kind", "it", "--depth", "3"],
        &["verify", "--lemma", "finite-com", "--count", "5"],
        &["verify", "--lemma", "lex", "--depth", "2", "--k-max", "1"],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn budget_overrun_exits_one() {
    let out = run(&[
        "verify",
        "--lemma",
        "chain",
        "--kind",
        "rt",
        "--branching",
        "9",
        "--depth",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("budget"));
}

#[test]
fn countermodel_certificate_json() {
    let out = run(&[
        "countermodel",
        "--axiom",
        "com",
        "--kind1",
        "in",
        "--kind2",
        "in",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["axiom"], "com");
    assert_eq!(v["kinds"], serde_json::json!(["in", "in"]));
    assert_eq!(v["bounds"], serde_json::json!({"m": 8, "k": 8, "d": 4}));
    assert_eq!(v["accepted"], true);
    assert_eq!(v["layers"].as_array().unwrap().len(), 2);
    let bad = run(&[
        "countermodel",
        "--axiom",
        "com",
        "--kind1",
        "in",
        "--kind2",
        "in",
        "--bounds",
        "8,8",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
