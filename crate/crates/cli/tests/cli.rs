use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn mfcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfcalc")).args(args).output().unwrap()
}

fn write_doc(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mfcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json_report(doc: &Path) -> (Option<i32>, Value) {
    let out = mfcalc(&[doc.to_str().unwrap(), "--quiet", "--json", "-"]);
    (out.status.code(), serde_json::from_slice(&out.stdout).unwrap())
}

fn task(report: &Value, index: usize) -> &Value {
    &report["tasks"][index]
}

#[test]
fn node_example_report() {
    let (code, report) = json_report(&example("node.json"));
    assert_eq!(code, Some(0));
    assert_eq!(report["schema"], "mfcalc-report/1");
    assert_eq!(report["pairing_normalization"]["kappa"], "1");
    assert_eq!(task(&report, 2)["result"]["mu"], 1);
    assert_eq!(task(&report, 5)["result"]["top_class"], "1");
    assert_eq!(task(&report, 7)["result"]["chi"], 1);
    assert_eq!(task(&report, 8)["result"]["theta"], -1);
    assert_eq!(task(&report, 9)["result"]["h"], 1);
    assert_eq!(task(&report, 10)["result"]["equal"], true);
    assert_eq!(task(&report, 10)["result"]["pairing"], "1");
    assert_eq!(report["summary"]["ok"], 14);
}

#[test]
fn small_examples_pass() {
    for name in ["cusp.json", "odd.json"] {
        let (code, report) = json_report(&example(name));
        assert_eq!(code, Some(0), "{name}: {report}");
    }
}

#[test]
fn text_report_is_aligned() {
    let out = mfcalc(&[example("cusp.json").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    let col = lines[0].find(" ok ").unwrap();
    assert!(lines[..11].iter().all(|l| l.find(" ok ") == Some(col)), "{text}");
    assert_eq!(lines[11], "11 tasks: 11 ok, 0 failed, 0 error");
}

#[test]
fn json_written_to_file() {
    let out_path = std::env::temp_dir().join(format!("mfcalc-cli-report-{}.json", std::process::id()));
    let out = mfcalc(&[example("odd.json").to_str().unwrap(), "--quiet", "--json", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(task(&report, 4)["result"]["top_class"], Value::Null);
    assert_eq!(task(&report, 6)["result"]["chi"], 0);
    std::fs::remove_file(out_path).unwrap();
}

const BASE: &str = r#"{
  "schema": "mfcalc-problem/1",
  "ring": {"x": ["x", "y"]},
  "mfs": {"node": {"matrices": {"potential": "x*y", "a": [["x"]], "b": MATRIX}}},
  "tasks": TASKS
}"#;

fn doc(matrix: &str, tasks: &str) -> String {
    BASE.replace("MATRIX", matrix).replace("TASKS", tasks)
}

#[test]
fn malformed_matrix_exits_2() {
    let path = write_doc("ragged.json", &doc(r#"[["y", "x"]]"#, "[]"));
    let out = mfcalc(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mfs.node"), "{err}");

    let path = write_doc("entry.json", &doc(r#"[["y +"]]"#, "[]"));
    let out = mfcalc(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("[0][0]"), "{err}");

    let path = write_doc("syntax.json", "{\n  \"schema\": \"mfcalc-problem/1\",\n  \"ring\": [\n");
    let out = mfcalc(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line "));

    let out = mfcalc(&["/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_factorization_is_rejected() {
    let path = write_doc("notmf.json", &doc(r#"[["x"]]"#, "[]"));
    let out = mfcalc(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn task_errors_exit_1() {
    let tasks = r#"[{"kind": "validate", "mf": "node"}, {"kind": "milnor", "poly": "x^2"}]"#;
    let path = write_doc("nonisolated.json", &doc(r#"[["y"]]"#, tasks));
    let (code, report) = json_report(&path);
    assert_eq!(code, Some(1));
    assert_eq!(task(&report, 0)["status"], "ok");
    assert_eq!(task(&report, 1)["status"], "error");
    assert!(task(&report, 1)["error"].as_str().unwrap().contains("not isolated"));
    assert_eq!(report["summary"]["error"], 1);
}

#[test]
fn overrides_reach_tasks() {
    let tasks = r#"[{"kind": "psi_strictness", "mf": "node"}]"#;
    let path = write_doc("overrides.json", &doc(r#"[["y"]]"#, tasks));
    let out = mfcalc(&[path.to_str().unwrap(), "--quiet", "--json", "-", "--trials", "4", "--seed", "9"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(task(&report, 0)["result"]["cases"], 4);
    assert_eq!(report["settings"]["seed"], 9);
    assert_eq!(report["settings"]["trials"], 4);
}

#[test]
fn two_quadrics_example() {
    let (code, report) = json_report(&example("two_quadrics.json"));
    assert_eq!(code, Some(0), "{report}");
    let suite = task(&report, 6);
    assert_eq!(suite["kind"], "ctop_vanishing_suite");
    assert_eq!(suite["result"]["trials"].as_array().unwrap().len(), 20);
    assert_eq!(suite["result"]["all_vanish"], true);
    let strata = &task(&report, 0)["result"]["strata"];
    assert_eq!(strata[0]["dimension"], 0);
    assert_eq!(strata[1]["dimension"], 1);
}
