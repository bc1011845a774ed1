use std::path::PathBuf;
use std::process::{Command, Output};

use hurwitz_core::tuple::TupleDocument;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn forge(args: &[&str]) -> Output {
    forge_env(args, &[])
}

fn forge_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hurwitz-forge"));
    cmd.args(args).env_remove("HURWITZ_FORGE_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn genus_prints_the_number() {
    let o = forge(&["genus", &path("genus_one.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1\n");
    let o = forge(&["--format", "json", "genus", &path("double_cover.json")]);
    assert_eq!(json(&o)["genus"], 0);
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&forge(&["validate", &path("a5_witness.json")])), 0);
    assert_eq!(code(&forge(&["validate", &path("invalid_product.json")])), 1);
    let o = forge(&["--format", "json", "validate", &path("intransitive.json")]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "invalid");
    assert_eq!(v["evidence"]["transitive"], false);
    assert_eq!(v["evidence"]["product_is_identity"], true);
}

#[test]
fn malformed_input_reports_position() {
    let o = forge(&["validate", &path("malformed.json")]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn schema_violations_are_itemized() {
    let o = forge(&["validate", &path("schema_violation.json")]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("point 4 is outside 1..=3"), "{err}");
    assert!(err.contains("point 2 appears more than once"), "{err}");
    assert!(err.contains("infinity_index 5"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&forge(&["validate", "/nonexistent/tuple.json"])), 2);
    assert_eq!(code(&forge(&["frobnicate"])), 2);
    assert_eq!(code(&forge(&["search", "--genus", "1"])), 2);
    assert_eq!(code(&forge(&["search", "--genus", "0", "--poles", "1,2,3,4"])), 2);
    assert_eq!(code(&forge(&["refine", &path("five_cycle.json"), "--keep", "0"])), 2);
    let o = forge_env(
        &["search", "--genus", "0", "--poles", "3"],
        &[("HURWITZ_FORGE_THREADS", "zero")],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn group_report() {
    let o = forge(&["--format", "json", "group", &path("a5_witness.json")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["order"], "60");
    assert_eq!(v["alternating"], true);
    assert_eq!(v["primitive"], true);
    assert_eq!(v["recognition"]["verdict"], "monodromy_is_Ad");
}

#[test]
fn refine_keep_matches_chain() {
    let o = forge(&["--format", "json", "refine", &path("five_cycle.json"), "--keep", "2"]);
    assert_eq!(code(&o), 0);
    let doc = TupleDocument::parse(&stdout(&o)).unwrap();
    let cycles: Vec<String> = doc.tuple.entries().iter().map(|e| e.to_string()).collect();
    assert_eq!(cycles, vec!["(1 2 3)", "(1 4 5)", "(1 5 4 3 2)"]);
    assert_eq!(doc.meta["provenance"][2]["original_entry"], 2);
    assert_eq!(doc.meta["genus"], 0);

    let o = forge(&["refine", &path("double_cover.json")]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("even cycle"));
    let o = forge(&["refine", &path("a5_witness.json"), "--keep", "4"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn search_output_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("witness.json");
    let out_s = out.to_string_lossy().into_owned();
    let o = forge(&[
        "--format", "json", "--out", &out_s, "search", "--genus", "0", "--poles", "4,3", "--seed", "5",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let doc = TupleDocument::parse(&text).unwrap();
    assert_eq!(doc.tuple.degree(), 12);
    assert_eq!(doc.meta["seed"], 5);
    assert_eq!(doc.meta["certificate"]["verdict"], "monodromy_is_Ad");
    assert_eq!(doc.emit(), text);

    let v = forge(&["validate", &out_s]);
    assert_eq!(code(&v), 0);
    let g = forge(&["genus", &out_s]);
    assert_eq!(stdout(&g), "0\n");
}

#[test]
fn search_is_reproducible() {
    let args = ["--format", "json", "search", "--genus", "0", "--poles", "5,2,2", "--seed", "11"];
    let a = forge(&args);
    let b = forge(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    // several workers: lowest stream wins, so repeated runs agree
    let env = [("HURWITZ_FORGE_THREADS", "3")];
    let c = forge_env(&args, &env);
    let d = forge_env(&args, &env);
    assert_eq!(code(&c), 0);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn search_negative_outcomes() {
    let o = forge(&["--format", "json", "search", "--genus", "1", "--poles", "4,4"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "infeasible");
    assert_eq!(v["feasibility"]["pole_order_gcd"], 7);

    let o = forge(&["--format", "json", "search", "--genus", "0", "--poles", "9,8", "--budget", "1"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "inconclusive");
    assert_eq!(v["stats"]["trials"], 1);
    assert_eq!(v["seed"], 0);
}

#[test]
fn shapes_and_the_feasibility_gap() {
    let o = forge(&["--format", "json", "shapes", "--genus", "1", "--degree", "16"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["shapes"].as_array().unwrap().len(), 1);
    assert_eq!(v["shapes"][0]["shape"]["multiplicities"], serde_json::json!([5, 4]));

    let o = forge(&["shapes", "--genus", "1", "--degree", "17"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("feasibility-gap"), "{text}");
    assert!(text.contains("--include-k1"), "{text}");

    let o = forge(&["--format", "json", "shapes", "--genus", "1", "--degree", "17", "--include-k1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["shapes"][0]["shape"]["pole_orders"], serde_json::json!([17]));
}

#[test]
fn dims_report() {
    let o = forge(&["--format", "json", "dims", "--genus", "1", "--degree", "16"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["dim_f_degree"], 9);
    assert_eq!(v["branch_bound"]["branch_bound"], "11/2");
    assert_eq!(v["branch_bound"]["max_branch_points"], 5);
    assert_eq!(v["shapes"][0]["dim_family"], 7);
    assert_eq!(v["shapes"][0]["dim_h"], 6);
    assert_eq!(v["shapes"][0]["matches_degree_dimension"], true);

    let o = forge(&["dims", "--genus", "1", "--degree", "15"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("undefined"));
}

#[test]
fn experiments_pass_at_small_scale() {
    let o = forge(&["--format", "json", "lemma1-stress", "--degree-range", "5-7", "--trials", "20", "--seed", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["exceptions"], 0);
    assert_eq!(v["seed"], 2);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 3);

    let o = forge(&["decomp-test", "--trials", "12", "--seed", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
