use std::path::PathBuf;
use std::process::{Command, Output};

use zhuforge::presentation::ValidationReport;
use zhuforge::quotient::QuotientDoc;
use zhuforge::zhu::ZhuDoc;

fn presentation(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../presentations")
        .join(format!("{name}.json"))
}

fn zhuforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zhuforge")).args(args).output().unwrap()
}

fn run_on(name: &str, args: &[&str]) -> Output {
    let path = presentation(name);
    let mut all = args.to_vec();
    all.extend(["--input", path.to_str().unwrap()]);
    zhuforge(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run_on("lattice", &["validate"]).status.code(), Some(0));
    assert_eq!(run_on("lattice", &["zhu"]).status.code(), Some(0));
    assert_eq!(run_on("lattice", &["quotient"]).status.code(), Some(0));
    assert_eq!(run_on("virasoro", &["quotient", "--quotient-bound", "6"]).status.code(), Some(2));
    assert_eq!(run_on("lattice", &["quotient", "--quotient-bound", "0"]).status.code(), Some(3));
    assert_eq!(zhuforge(&["zhu", "--input", "/nonexistent.json"]).status.code(), Some(3));
    assert_eq!(zhuforge(&["zhu"]).status.code(), Some(3));
    assert_eq!(zhuforge(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(zhuforge(&["--help"]).status.code(), Some(0));
}

#[test]
fn reruns_are_byte_identical() {
    for name in ["w3", "lattice"] {
        for sub in ["zhu", "quotient", "singular"] {
            let a = run_on(name, &[sub]);
            let b = run_on(name, &[sub, "--sequential"]);
            assert_eq!(a.stdout, b.stdout, "{name} {sub}");
            assert!(!a.stdout.is_empty());
        }
    }
}

#[test]
fn json_documents_round_trip() {
    let zhu = stdout(&run_on("lattice", &["zhu"]));
    let doc: ZhuDoc = serde_json::from_str(&zhu).unwrap();
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", zhu);

    let quot = stdout(&run_on("lattice", &["quotient"]));
    let doc: QuotientDoc = serde_json::from_str(&quot).unwrap();
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", quot);

    let v: serde_json::Value = serde_json::from_str(&quot).unwrap();
    assert_eq!(v["basis"].as_array().map(Vec::len), Some(7), "{v}");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zhu.json");
    let o = run_on("lattice", &["zhu", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), run_on("lattice", &["zhu"]).stdout);
}

#[test]
fn invalid_presentation_is_reported() {
    let src = std::fs::read_to_string(presentation("lattice")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&src).unwrap();
    doc["relations"][0]["value"][0]["word"] = serde_json::json!([["a", -1]]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, doc.to_string()).unwrap();

    let o = zhuforge(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: ValidationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!report.is_valid());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.json"), "{err}");

    let o = zhuforge(&["zhu", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(zhuforge(&["validate", "--input", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn normal_form_and_text_output() {
    let o = run_on("virasoro", &["nf", "w(2) w(-2) w", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).trim().is_empty());
    let o = run_on("lattice", &["singular", "--format", "text"]);
    assert!(stdout(&o).starts_with("lattice: degenerate"), "{}", stdout(&o));
    let o = run_on("virasoro", &["nf", "w(-1"]);
    assert_eq!(o.status.code(), Some(3));
}
