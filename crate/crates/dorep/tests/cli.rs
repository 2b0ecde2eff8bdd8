//! End-to-end tests of the `dorep` binary: exit codes, witness output,
//! and file flows.

use dorep::actions::Menu;
use dorep::io::{to_json_string, MenuFile, ModelFile, PrefsFile};
use dorep::logic::Signature;
use dorep::models::{BasicModel, SelectionModel, WellOrderFamily};
use dorep::rat::{rat, rat_int, Rat};
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dorep")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dorep-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(bin()).args(args).output().expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn generated_fixture_passes_check_axioms() {
    let dir = workdir("gen");
    let (code, _, _) = run(&[
        "generate",
        "--props",
        "p,q",
        "--seed",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let prefs = dir.join("prefs.json");
    let menu = dir.join("menu.json");
    let (code, stdout, _) = run(&[
        "check-axioms",
        "--prefs",
        prefs.to_str().unwrap(),
        "--menu",
        menu.to_str().unwrap(),
        "--budget",
        "2000",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 0, "stdout: {stdout}");
    let body: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(body["all_pass"], true);
    assert_eq!(body["seed"], 5);
}

#[test]
fn specificity_violation_exits_two_with_stage() {
    // Conditional acts at atom {}: the pair disjunction for {p},{q}
    // strictly between both atom acts, so no precisification works.
    let dir = workdir("ssc");
    let sig = Signature::new(["p", "q"]).unwrap();
    let menu = Menu::rich(&sig);
    let member = |idx: usize| menu.formula(idx).display(&sig).to_string();
    let guard = |idx: usize| format!("if !p & !q then do({}) else do(true)", member(idx));
    let disj = menu
        .pair_member(dorep::logic::Atom(1), dorep::logic::Atom(2))
        .unwrap();
    let ax = menu.atom_member(dorep::logic::Atom(1)).unwrap();
    let ay = menu.atom_member(dorep::logic::Atom(2)).unwrap();
    let prefs = PrefsFile {
        props: Some(vec!["p".into(), "q".into()]),
        menu: MenuFile::from_menu(&menu).formulas,
        classes: Some(vec![vec![guard(disj)], vec![guard(ax)], vec![guard(ay)]]),
        model: None,
    };
    let prefs_path = dir.join("prefs.json");
    write(&prefs_path, &to_json_string(&prefs).unwrap());

    let out_path = dir.join("rep.json");
    let (code, stdout, _) = run(&[
        "synthesize",
        "--prefs",
        prefs_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "stdout: {stdout}");
    let body: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(body["stage"], "ssc");
    assert!(body["report"]["witness"]["specificity"].is_object());
    assert!(!out_path.exists());
}

#[test]
fn infeasible_partition_exits_two_with_certificate() {
    // Centering only pins the two guarded no-op tables to do(true);
    // ranking a rotation triple of the remaining tables strictly breaks
    // additivity, so the axioms pass and the feasibility stage fails.
    let dir = workdir("lp");
    let act = |then: &str, els: &str| format!("if !p then do({then}) else do({els})");
    let prefs = PrefsFile {
        props: Some(vec!["p".into()]),
        menu: vec!["!p".into(), "p".into(), "true".into()],
        classes: Some(vec![
            vec![act("p", "true"), act("true", "!p")],
            vec![act("!p", "true"), act("true", "p"), "do(true)".into()],
            vec![act("!p", "p"), act("p", "!p")],
        ]),
        model: None,
    };
    let prefs_path = dir.join("prefs.json");
    write(&prefs_path, &to_json_string(&prefs).unwrap());
    let out_path = dir.join("rep.json");
    let (code, stdout, _) = run(&[
        "synthesize",
        "--prefs",
        prefs_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "stdout: {stdout}");
    let body: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(body["stage"], "lp");
    let items = body["certificate"]["items"].as_array().unwrap();
    assert!(items.len() >= 2);
    assert!(items.iter().any(|i| i["strict"] == true));
    assert!(body["certificate"]["canc_witness"]["cancellation"].is_object());
}

#[test]
fn missing_true_in_menu_exits_three() {
    let dir = workdir("notrue");
    let menu_path = dir.join("menu.json");
    write(
        &menu_path,
        r#"{"props": ["p"], "formulas": ["p", "!p"]}"#,
    );
    let prefs_path = dir.join("prefs.json");
    write(
        &prefs_path,
        r#"{"menu": ["p", "!p"], "classes": [["do(p)"]]}"#,
    );
    let (code, _, stderr) = run(&[
        "check-axioms",
        "--prefs",
        prefs_path.to_str().unwrap(),
        "--menu",
        menu_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "stderr: {stderr}");
    assert!(stderr.contains("true"), "stderr: {stderr}");
}

#[test]
fn synthesize_writes_sixteen_state_representation() {
    let dir = workdir("synth");
    run(&[
        "generate",
        "--props",
        "p,q",
        "--seed",
        "2",
        "--out",
        dir.to_str().unwrap(),
    ]);
    let out_path = dir.join("rep.json");
    let (code, stdout, _) = run(&[
        "synthesize",
        "--prefs",
        dir.join("prefs.json").to_str().unwrap(),
        "--menu",
        dir.join("menu.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--seed",
        "2",
    ]);
    assert_eq!(code, 0, "stdout: {stdout}");
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(body["states"].as_array().unwrap().len(), 16);
    assert_eq!(body["provenance"]["seed"], 2);
    assert_eq!(body["provenance"]["disagreements"], 0);
    // Probabilities are exact sixteenths.
    assert_eq!(body["pi"]["{}|{}"], "1/16");
}

#[test]
fn act_space_cap_exits_three_with_cardinality() {
    let (code, _, stderr) = run(&["roundtrip", "--props", "p,q,r", "--seeds", "1..1"]);
    assert_eq!(code, 3, "stderr: {stderr}");
    // 37 menu members over 8 atoms: 37^8 tables.
    assert!(stderr.contains("3512479453921"), "stderr: {stderr}");
}

#[test]
fn evaluate_contingent_policy_narrative() {
    // A policy applied only when a condition holds: states violating
    // the condition stay put, states satisfying it move to the closest
    // state where the policy formula is true.
    let dir = workdir("policy");
    let sig = Signature::new(["healthy", "mw15"]).unwrap();
    let model = BasicModel::canonical(&sig);
    // Closeness preserves the health of the economy: from {healthy},
    // the nearest mw15-state keeps healthy true.
    let family = WellOrderFamily::new(
        &model,
        vec![
            vec![0, 2, 1, 3],
            vec![1, 3, 0, 2],
            vec![2, 0, 1, 3],
            vec![3, 2, 1, 0],
        ],
    )
    .unwrap();
    let menu = Menu::new(
        &sig,
        vec![
            dorep::logic::parse_formula("mw15", &sig).unwrap(),
            dorep::logic::Formula::True,
        ],
    )
    .unwrap();
    let sm = SelectionModel::induce(model, menu, family).unwrap();
    let pi: Vec<Rat> = vec![rat(1, 4); 4];
    let u: Vec<Rat> = vec![rat_int(0), rat_int(2), rat_int(1), rat_int(3)];
    let file = ModelFile::from_parts(&sm, Some(&pi), Some(&u));
    let model_path = dir.join("model.json");
    write(&model_path, &to_json_string(&file).unwrap());

    let (code, stdout, _) = run(&[
        "evaluate",
        "--model",
        model_path.to_str().unwrap(),
        "--act",
        "if healthy then do(mw15)",
    ]);
    assert_eq!(code, 0);
    // {healthy} moves to the closest mw15-state; others stay.
    assert!(stdout.contains("{healthy} -> {healthy,mw15}"), "{stdout}");
    assert!(stdout.contains("{} -> {}"), "{stdout}");
    assert!(stdout.contains("{mw15} -> {mw15}"), "{stdout}");
    assert!(stdout.contains("{healthy,mw15} -> {healthy,mw15}"), "{stdout}");
    assert!(stdout.contains("expected utility: 7/4"), "{stdout}");

    // Identity for do(true) on the same (centered) model.
    let (code, stdout, _) = run(&[
        "evaluate",
        "--model",
        model_path.to_str().unwrap(),
        "--act",
        "do(true)",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("{mw15} -> {mw15}"));

    // Unknown menu payload is a precondition failure.
    let (code, _, _) = run(&[
        "evaluate",
        "--model",
        model_path.to_str().unwrap(),
        "--act",
        "do(healthy)",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn roundtrip_reports_failures_never_panics() {
    // Seeds over a single prop: everything passes and exits zero.
    let (code, stdout, _) = run(&["roundtrip", "--props", "p", "--seeds", "2..4", "--pairs", "100"]);
    assert_eq!(code, 0);
    let body: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(body["passed"], 3);
    assert_eq!(body["seeds"], "2..4");
}

#[test]
fn generate_is_byte_identical_across_runs() {
    let dir_a = workdir("det-a");
    let dir_b = workdir("det-b");
    for dir in [&dir_a, &dir_b] {
        let (code, _, _) = run(&[
            "generate",
            "--props",
            "p,q",
            "--seed",
            "42",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    for name in ["model.json", "menu.json", "prefs.json"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn check_axioms_exits_two_on_violation() {
    // The specificity-violating partition also fails check-axioms.
    let dir = workdir("axfail");
    let sig = Signature::new(["p", "q"]).unwrap();
    let menu = Menu::rich(&sig);
    let member = |idx: usize| menu.formula(idx).display(&sig).to_string();
    let guard = |idx: usize| format!("if !p & !q then do({}) else do(true)", member(idx));
    let disj = menu
        .pair_member(dorep::logic::Atom(1), dorep::logic::Atom(2))
        .unwrap();
    let ax = menu.atom_member(dorep::logic::Atom(1)).unwrap();
    let ay = menu.atom_member(dorep::logic::Atom(2)).unwrap();
    let prefs = PrefsFile {
        props: Some(vec!["p".into(), "q".into()]),
        menu: MenuFile::from_menu(&menu).formulas,
        classes: Some(vec![vec![guard(disj)], vec![guard(ax)], vec![guard(ay)]]),
        model: None,
    };
    let prefs_path = dir.join("prefs.json");
    write(&prefs_path, &to_json_string(&prefs).unwrap());
    let (code, stdout, _) = run(&[
        "check-axioms",
        "--prefs",
        prefs_path.to_str().unwrap(),
        "--budget",
        "500",
    ]);
    assert_eq!(code, 2, "stdout: {stdout}");
    let body: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(body["all_pass"], false);
    assert!(body["reports"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["pass"] == false && r["witness"].is_object()));
}

#[test]
fn evaluate_richness_violation_exits_three() {
    // One state satisfying p, but the menu demands a !p-state.
    let dir = workdir("rich");
    let model_path = dir.join("model.json");
    write(
        &model_path,
        r#"{
  "props": ["p"],
  "states": ["w"],
  "valuation": {"p": ["w"]},
  "orders": {"w": ["w"]},
  "menu": ["!p", "true"]
}"#,
    );
    let (code, _, stderr) = run(&[
        "evaluate",
        "--model",
        model_path.to_str().unwrap(),
        "--act",
        "do(true)",
    ]);
    assert_eq!(code, 3, "stderr: {stderr}");
    assert!(stderr.contains("empty extension"), "stderr: {stderr}");
}

#[test]
fn cancellation_violation_found_by_check_axioms() {
    // The additivity-breaking partition passes the three exhaustive
    // checks; the sampled cancellation search finds a violating tuple.
    let dir = workdir("canc");
    let act = |then: &str, els: &str| format!("if !p then do({then}) else do({els})");
    let prefs = PrefsFile {
        props: Some(vec!["p".into()]),
        menu: vec!["!p".into(), "p".into(), "true".into()],
        classes: Some(vec![
            vec![act("p", "true"), act("true", "!p")],
            vec![act("!p", "true"), act("true", "p"), "do(true)".into()],
            vec![act("!p", "p"), act("p", "!p")],
        ]),
        model: None,
    };
    let prefs_path = dir.join("prefs.json");
    write(&prefs_path, &to_json_string(&prefs).unwrap());
    let (code, stdout, _) = run(&[
        "check-axioms",
        "--prefs",
        prefs_path.to_str().unwrap(),
        "--budget",
        "100000",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 2, "stdout: {stdout}");
    let body: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let by_axiom = |name: &str| -> serde_json::Value {
        body["reports"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["axiom"] == name)
            .unwrap()
            .clone()
    };
    assert_eq!(by_axiom("cent")["pass"], true);
    assert_eq!(by_axiom("ssc")["pass"], true);
    assert_eq!(by_axiom("trans")["pass"], true);
    let canc = by_axiom("canc");
    assert_eq!(canc["pass"], false);
    assert!(canc["witness"]["cancellation"]["alphas"].is_array());
}
