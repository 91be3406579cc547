use std::path::PathBuf;
use std::process::Command;

use quiverdt::fixture::parse_fixture;
use quiverdt_cli::{run, Outcome, EXIT_BUDGET, EXIT_OK, EXIT_USAGE};
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn quiverdt(args: &[&str]) -> Outcome {
    run(std::iter::once("quiverdt").chain(args.iter().copied()))
}

fn json_ok(args: &[&str]) -> Value {
    let out = quiverdt(args);
    assert_eq!(out.code, EXIT_OK, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn dt_on_a2() {
    let a2 = fixture("a2.quiver");
    let doc = json_ok(&["dt", &a2, "--q", "2", "--theta", "main", "--bound", "1,1"]);
    assert_eq!(doc["meta"]["q"], json!(2));
    assert_eq!(doc["meta"]["theta"], json!(["1", "0"]));
    assert_eq!(doc["meta"]["bound"], json!([1, 1]));
    assert_eq!(doc["meta"]["quiver_hash"].as_str().unwrap().len(), 64);
    let last = &doc["results"][2];
    assert_eq!(last["alpha"], json!([1, 1]));
    assert_eq!(last["value"]["s"], json!([0, -1]));
    assert_eq!(last["value"]["zeta_powers"], json!([[0, 1, -1, 1]]));
}

#[test]
fn check_reports() {
    let primitive = |name: &str| {
        let doc = json_ok(&["check", &fixture(name)]);
        let entry = doc["results"].as_array().unwrap().iter().find(|r| r["check"] == "primitive").unwrap().clone();
        entry["pass"].as_bool().unwrap()
    };
    assert!(!primitive("jordan_l2.quiver"));
    assert!(!primitive("jordan_l3.quiver"));
    assert!(primitive("three_loop.quiver"));
    assert!(primitive("conifold.quiver"));

    let doc = json_ok(&["check", &fixture("a2.quiver"), "--theta", "0,0", "--bound", "1,1"]);
    let generic: Vec<&Value> = doc["results"].as_array().unwrap().iter().filter(|r| r["check"] == "generic").collect();
    let last = generic.last().unwrap();
    assert_eq!(last["alpha"], json!([1, 1]));
    assert_eq!(last["pass"], json!(false));
    assert_eq!(last["witness"], json!([1, 0]));
}

#[test]
fn verification_commands_pass() {
    let a2 = fixture("a2.quiver");
    let doc = json_ok(&["verify-hn", &a2, "--q", "2", "--bound", "2,2"]);
    assert_eq!(doc["results"][0]["pass"], json!(true));
    let doc = json_ok(&["wallcross", &a2, "--q", "3", "--bound", "2,2"]);
    assert!(doc["results"].as_array().unwrap().iter().all(|r| r["equal"] == json!(true)));
    json_ok(&["verify-hn", &fixture("jordan_l3.quiver"), "--q", "3", "--bound", "2"]);
}

#[test]
fn counts() {
    let doc = json_ok(&["count", &fixture("three_loop.quiver"), "--q", "2", "--bound", "1"]);
    let r = &doc["results"][0];
    assert_eq!(r["semistable"], json!(8));
    assert_eq!(r["semistable_w0"], json!(8));
    assert_eq!(r["stack"], json!("8"));
}

#[test]
fn hall_product_of_simples() {
    let a2 = fixture("a2.quiver");
    let doc = json_ok(&["hall", &a2, "--rep", "dim=0,1", "--rep", "dim=1,0"]);
    let classes: Vec<(String, String)> = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["class"].as_str().unwrap().to_string(), r["coefficient"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(
        classes,
        vec![("dim=1,1 x=[0]".to_string(), "1".to_string()), ("dim=1,1 x=[1]".to_string(), "1".to_string())]
    );
    let out = quiverdt(&["hall", &a2, "--rep", "dim=1,0 x=[5]"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn integration_maps_agree_on_cubic_loop() {
    let j = fixture("jordan_l3.quiver");
    for map in ["ieq", "ipsi"] {
        let doc = json_ok(&["integrate", &j, "--q", "3", "--bound", "1", "--map", map]);
        let terms = doc["results"][0]["terms"].as_object().unwrap();
        assert_eq!(terms.keys().collect::<Vec<_>>(), vec!["0"], "{map}");
    }
    let doc = json_ok(&["integrate", &j, "--q", "3", "--bound", "1", "--map", "i", "--dim", "1"]);
    assert_eq!(doc["results"][0]["terms"]["1"]["zeta_powers"][0], json!([3, 2, 0, 1]));
}

#[test]
fn hat_quiver_renders_as_fixture() {
    let j = fixture("jordan_l3.quiver");
    let doc = json_ok(&["hat", &j, "--frame", "f:*->1", "--dim", "1"]);
    let r = &doc["results"][0];
    assert_eq!(r["levels"], json!(2));
    assert_eq!(r["vertices"], json!(10));
    assert_eq!(r["arrows"], json!(8));
    assert_eq!(r["acyclic"], json!(true));
    assert_eq!(r["hat_dim_vectors"], json!(5));

    let out = quiverdt(&["hat", &j, "--frame", "f:*->1", "--dim", "1", "--format", "table"]);
    assert_eq!(out.code, EXIT_OK);
    let spec = parse_fixture(&out.stdout).unwrap();
    assert_eq!(spec.quiver.num_vertices(), 10);
    assert!(spec.quiver.check_acyclic().is_ok());

    assert_eq!(quiverdt(&["hat", &j, "--frame", "f:1->1", "--dim", "1"]).code, EXIT_USAGE);
    assert_eq!(quiverdt(&["hat", &j, "--frame", "nonsense", "--dim", "1"]).code, EXIT_USAGE);
}

#[test]
fn table_output() {
    let out = quiverdt(&["dt", &fixture("a2.quiver"), "--format", "table"]);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert!(lines[0].starts_with("alpha"));
    assert!(lines[1].starts_with("-----"));
    assert!(lines.last().unwrap().ends_with("-s"));
}

#[test]
fn error_exit_codes() {
    let a2 = fixture("a2.quiver");
    let out = quiverdt(&["count", &a2, "--bound", "2,2", "--max-points", "1"]);
    assert_eq!(out.code, EXIT_BUDGET, "{}", out.stderr);
    assert!(out.stderr.contains("budget"));

    let out = quiverdt(&["dt", &a2, "--no-such-flag"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert_eq!(quiverdt(&["dt", &a2, "--bound", "1"]).code, EXIT_USAGE);
    assert_eq!(quiverdt(&["dt", &a2, "--theta", "nope"]).code, EXIT_USAGE);
    assert_eq!(quiverdt(&["dt", "/nonexistent/fixture"]).code, EXIT_USAGE);
    assert_eq!(quiverdt(&["dt", &a2, "--q", "6"]).code, EXIT_USAGE);

    let path = std::env::temp_dir().join(format!("quiverdt-bad-{}.quiver", std::process::id()));
    std::fs::write(&path, "vertex 1\narrow l : 1 -> 1\npotential 1 l zz\n").unwrap();
    let out = quiverdt(&["check", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("line 3, column 15"), "{}", out.stderr);
    assert!(out.stderr.contains("zz"));

    let out = quiverdt(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("verify-hn"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_quiverdt");
    let ok = Command::new(bin).args(["verify-hn", &fixture("a2.quiver"), "--bound", "1,1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let budget = Command::new(bin)
        .args(["count", &fixture("a2.quiver"), "--max-points", "1", "--bound", "2,2"])
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(3));
    let usage = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}
