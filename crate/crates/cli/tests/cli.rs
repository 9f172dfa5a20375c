//! End-to-end tests against the compiled binary: canonical output lines,
//! exit codes, and the JSON report schema.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_str().expect("utf-8 path").to_string()
}

fn qsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

// ---------------------------------------------------------------------------
// canonical text output
// ---------------------------------------------------------------------------

#[test]
fn normal_form_reproduces_the_rank_one_cross_relation() {
    let out = qsp(&["nf", "--cartan", "A1", "x1 y1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "y1 x1 + (t1 - t1^-1)/(q - q^-1)\n");
}

#[test]
fn serre_defect_matches_the_worked_split_example() {
    let out = qsp(&["serre-defect", "1", "2", "--config", &fixture("a2split.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("closed: true"), "{text}");
    assert!(text.contains("defect: q^-1 * B2"), "{text}");
}

#[test]
fn torus_defects_print_in_balanced_orientation() {
    let out = qsp(&["serre-defect", "1", "2", "--config", &fixture("a1xa1flip.json")]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("defect: (t1^-1 t2 - t1 t2^-1)/(q - q^-1)"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn spherical_distinguishes_the_fundamental_and_doubled_weights() {
    let out = qsp(&["spherical", "--weight", "w:1,0", "--config", &fixture("a2split.json")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "false\n");

    let out = qsp(&["spherical", "--weight", "w:2,0", "--config", &fixture("a2split.json")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "true\n");
}

#[test]
fn simple_module_reports_dimensions_and_the_invariant_line() {
    let out = qsp(&["simple", "--cartan", "A1", "--weight", "w:2", "--invariants"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dimension: 3"), "{text}");
    assert!(text.contains("invariants: 1"), "{text}");
}

#[test]
fn coideal_check_passes_on_the_parameter_fixtures() {
    for cfg in ["a2flip.json", "a1s.json"] {
        let out = qsp(&["coideal-check", "--config", &fixture(cfg)]);
        assert!(out.status.success(), "{cfg}");
        assert!(stdout(&out).contains("pass: true"), "{cfg}: {}", stdout(&out));
    }
}

#[test]
fn support_report_is_honest_about_the_parity_violated_pair() {
    let out = qsp(&["lemma73", "2", "1", "--config", &fixture("a2pi.json")]);
    assert!(out.status.success(), "report commands exit 0");
    assert!(stdout(&out).contains("pass: false"), "{}", stdout(&out));

    let out = qsp(&["lemma73", "1", "2", "--config", &fixture("a2split.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("pass: true"), "{}", stdout(&out));
}

#[test]
fn sequence_reports_the_raising_data_of_the_satake_datum() {
    let out = qsp(&["sequence", "2", "--config", &fixture("a2pi.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("indices: [1]"), "{text}");
    assert!(text.contains("m: 1"), "{text}");
}

#[test]
fn restricted_roots_label_the_flip_pair_as_nonreduced() {
    let out = qsp(&["restricted-roots", "--config", &fixture("a2flip.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("BC1 (nonreduced)"), "{text}");
    assert!(text.contains("variation pairs: {1, 2}"), "{text}");
}

#[test]
fn specialization_reports_the_classical_generators() {
    let out = qsp(&["specialize", "--config", &fixture("a2split.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("B1 -> e1 + f1"), "{text}");
    assert!(text.contains("pass: true"), "{text}");
}

#[test]
fn flocal_accepts_only_nonpositive_multiples() {
    let out = qsp(&["flocal", "--cartan", "A1", "--lambda", "-2"]);
    assert_eq!(stdout(&out), "true\n");
    let out = qsp(&["flocal", "--cartan", "A1", "--lambda", "1"]);
    assert_eq!(stdout(&out), "false\n");
}

// ---------------------------------------------------------------------------
// round trips
// ---------------------------------------------------------------------------

#[test]
fn pretty_output_is_a_fixed_point_of_the_normal_form() {
    for (cartan, expr) in [
        ("A1", "x1 y1"),
        ("A2", "x1 x2 y1 y2"),
        ("B2", "x2 y2 x1 y1"),
        ("A1xA1", "x1 y1 x2 y2"),
    ] {
        let first = stdout(&qsp(&["nf", "--cartan", cartan, expr]));
        let again = stdout(&qsp(&["nf", "--cartan", cartan, first.trim()]));
        assert_eq!(first, again, "{cartan}: {expr}");
    }
}

// ---------------------------------------------------------------------------
// exit codes
// ---------------------------------------------------------------------------

#[test]
fn parse_errors_exit_with_code_one_and_cite_the_position() {
    let out = qsp(&["nf", "--cartan", "A1", "x1 +"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("byte"), "{}", stderr(&out));
}

#[test]
fn exhausted_budgets_exit_with_code_two() {
    let out = qsp(&[
        "nf",
        "--cartan",
        "B2",
        "--budget",
        "10",
        "x1 x2 x1 x2 y1 y2 y1 y2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn the_pair_source_must_be_given_exactly_once() {
    let out = qsp(&["nf", "x1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = qsp(&[
        "nf",
        "--cartan",
        "A1",
        "--config",
        &fixture("a2split.json"),
        "x1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn root_coordinate_arguments_reject_the_weight_basis_tag() {
    let out = qsp(&["flocal", "--cartan", "A1", "--lambda", "w:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("root coordinates"), "{}", stderr(&out));
}

#[test]
fn degree_bounds_below_the_minimum_are_rejected() {
    let out = qsp(&["nf", "--cartan", "B2", "--max-degree", "1", "x1"]);
    assert_eq!(out.status.code(), Some(1));
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

#[test]
fn json_reports_carry_the_stable_schema() {
    for args in [
        vec!["nf", "--cartan", "A1", "x1 y1", "--json"],
        vec![
            "serre-defect",
            "1",
            "2",
            "--config",
            &fixture("a2split.json"),
            "--json",
        ],
        vec!["build-pair", "--config", &fixture("a2pi.json"), "--json"],
        vec!["spherical", "--weight", "w:2,0", "--cartan", "A2", "--json"],
    ] {
        let out = qsp(&args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        let v: serde_json::Value =
            serde_json::from_str(&stdout(&out)).expect("valid JSON report");
        let obj = v.as_object().expect("object report");
        for key in ["pair", "subcommand", "inputs", "result", "certificates"] {
            assert!(obj.contains_key(key), "{args:?} missing {key}");
        }
        assert!(v["certificates"].is_array(), "{args:?}");
    }
}

#[test]
fn build_pair_json_lists_the_involution_data() {
    let out = qsp(&["build-pair", "--config", &fixture("a2pi.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let result = &v["result"];
    assert_eq!(result["pi_star"], serde_json::json!([2]));
    assert_eq!(result["sequences"]["2"]["indices"], serde_json::json!([1]));
    assert_eq!(result["m"]["2"], serde_json::json!(1));
    assert_eq!(result["parity_ok"], serde_json::json!(false));
    assert_eq!(v["pair"]["pi_theta"], serde_json::json!([1]));
}

#[test]
fn descriptor_parameters_reach_the_presentation() {
    let out = qsp(&["build-pair", "--config", &fixture("a2flip.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["pair"]["d"], serde_json::json!("flip"));
    assert_eq!(v["pair"]["c"]["1"], serde_json::json!("q"));
}
