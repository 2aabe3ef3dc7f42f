mod common;

use std::fs;
use std::process::Command;

use common::{corpus, schema_dir, stderr, stdout, zdga};
use serde_json::Value;

fn load_schema(name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(schema_dir().join(name)).unwrap()).unwrap()
}

fn analysis_validator() -> jsonschema::Validator {
    jsonschema::validator_for(&load_schema("analysis-report.schema.json")).unwrap()
}

fn theorem_validator() -> jsonschema::Validator {
    let analysis = load_schema("analysis-report.schema.json");
    let registry = jsonschema::Registry::new()
        .add("https://example.invalid/zdga/analysis-report.schema.json", analysis)
        .unwrap()
        .prepare()
        .unwrap();
    jsonschema::options().with_registry(&registry).build(&load_schema("theorem-report.schema.json")).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn analyze_json(spec: &str, extra: &[&str]) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut args = vec!["analyze", spec, "--json", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = zdga(&args);
    assert!(out.status.success(), "{spec}: {}", stderr(&out));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_prints_the_text_report() {
    let out = zdga(&["analyze", "GF(4)xGF(4)", "--no-timing"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("|Z(R)|      7"), "{text}");
    assert!(text.contains("gamma_a     2"), "{text}");
    assert!(text.contains("psi_g       3"), "{text}");
    assert!(!text.contains("timing"));
}

#[test]
fn parse_errors_exit_2_with_a_caret() {
    let out = zdga(&["analyze", "Z3x"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("position 3"), "{err}");
    assert!(err.lines().any(|l| l.trim_end() == "     ^"), "{err}");

    for bad in ["Z1", "GF(6)", "Z2[x]/(2x^2)", "Z3(+)Z2", "Q7"] {
        assert_eq!(zdga(&["analyze", bad]).status.code(), Some(2), "{bad}");
    }
}

#[test]
fn size_caps_exit_3() {
    assert_eq!(zdga(&["analyze", "Z3xZ5", "--max-order", "10"]).status.code(), Some(3));
    assert_eq!(zdga(&["graph", "Z3xZ5", "--max-order", "10"]).status.code(), Some(3));

    let out = zdga(&["analyze", "Z27", "--max-exact", "4", "--no-timing"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("psi_g       not computed (cap)"));
}

#[test]
fn max_order_is_read_from_the_environment() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_zdga"))
            .args(["analyze", "Z3xZ5", "--no-timing"])
            .env("ZDGA_MAX_ORDER", value)
            .output()
            .unwrap()
    };
    assert_eq!(run("10").status.code(), Some(3));
    assert_eq!(run("15").status.code(), Some(0));
}

#[test]
fn empty_graph_is_rejected_by_graph() {
    for s in ["Z2", "Z7", "GF(4)"] {
        let out = zdga(&["graph", s]);
        assert_eq!(out.status.code(), Some(2), "{s}");
        assert!(stderr(&out).contains("empty"));
    }
}

#[test]
fn analyze_of_a_field_reports_an_undefined_psi() {
    let report = analyze_json("Z7", &["--no-timing"]);
    assert_eq!(report["vertices"], 0);
    assert_eq!(report["psi_g"], "undefined (empty graph)");
    assert_valid(&analysis_validator(), &report);
}

#[test]
fn unwritable_output_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.json");
    let out = zdga(&["analyze", "Z9", "--json", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    let out = zdga(&["graph", "Z9", "--dot", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn dot_output_is_exact() {
    let z9 = "graph \"Z9\" {\n  \"3\";\n  \"6\";\n  \"3\" -- \"6\";\n}\n";
    assert_eq!(stdout(&zdga(&["graph", "Z9"])), z9);

    let z2z4 = concat!(
        "graph \"Z2xZ4\" {\n",
        "  \"(0,1)\";\n  \"(0,2)\";\n  \"(0,3)\";\n  \"(1,0)\";\n  \"(1,2)\";\n",
        "  \"(0,1)\" -- \"(1,0)\";\n",
        "  \"(0,2)\" -- \"(1,0)\";\n",
        "  \"(0,2)\" -- \"(1,2)\";\n",
        "  \"(0,3)\" -- \"(1,0)\";\n",
        "}\n"
    );
    assert_eq!(stdout(&zdga(&["graph", "Z2xZ4"])), z2z4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    assert!(zdga(&["analyze", "Z2xZ4", "--dot", path.to_str().unwrap()]).status.success());
    assert_eq!(fs::read_to_string(path).unwrap(), z2z4);
}

#[test]
fn analysis_json_matches_its_schema() {
    let validator = analysis_validator();
    for s in ["Z9", "Z2xZ4", "GF(4)xGF(4)", "Z3x(Z3(+)Z3)", "Z2[x]/(x^3)"] {
        let report = analyze_json(s, &["--certificate", "--oracle"]);
        assert_valid(&validator, &report);
        assert!(report["timing"].is_object());
        assert!(report["certificate"]["classes"].is_array());
    }
    let empty = analyze_json("Z2", &[]);
    assert_valid(&validator, &empty);
}

#[test]
fn analysis_json_values() {
    let r = analyze_json("Z2xZ4", &["--no-timing", "--certificate"]);
    assert_eq!(r["ring_order"], 8);
    assert_eq!(r["zero_divisors"], 6);
    assert_eq!(r["vertices"], 5);
    assert_eq!(r["edges"], 4);
    assert_eq!(r["gamma_a"], 2);
    assert_eq!(r["psi_g"], 2);
    assert!(r.get("timing").is_none());
    assert_eq!(r["graph_hash"].as_str().unwrap().len(), 64);
    assert_eq!(r["certificate"]["graph_hash"], r["graph_hash"]);
}

#[test]
fn theorem_report_matches_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let out = zdga(&["verify-theorems", "--max-order", "32", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid(&theorem_validator(), &report);
    assert_eq!(report["summary"]["mismatched"], 0);

    let out = zdga(&["verify-theorems", "--max-order", "16", "--inject-fault", "--json", path.to_str().unwrap()]);
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_valid(&theorem_validator(), &report);
}

#[test]
fn injected_fault_is_reported() {
    let clean = zdga(&["verify-theorems", "--max-order", "16", "--no-timing"]);
    assert_eq!(clean.status.code(), Some(0));
    assert!(!stdout(&clean).contains("MISMATCH"));

    let faulty = zdga(&["verify-theorems", "--max-order", "16", "--no-timing", "--inject-fault"]);
    assert_eq!(faulty.status.code(), Some(1));
    let text = stdout(&faulty);
    assert!(text.lines().any(|l| l.starts_with("MISMATCH FxK Z3xZ3")), "{text}");
}

#[test]
fn output_is_byte_stable_without_timing() {
    for args in [
        &["analyze", "Z2xZ2xZ3", "--no-timing", "--certificate"][..],
        &["verify-theorems", "--max-order", "24", "--no-timing"][..],
        &["graph", "Z3x(Z3(+)Z3)"][..],
    ] {
        let a = zdga(args);
        let b = zdga(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn oracle_never_disagrees_on_the_corpus() {
    for s in corpus() {
        let out = zdga(&["analyze", &s, "--oracle", "--no-timing"]);
        assert_eq!(out.status.code(), Some(0), "{s}: {}", stderr(&out));
    }
}
