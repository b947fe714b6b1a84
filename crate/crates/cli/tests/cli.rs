use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn coreset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coreset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = coreset(&all);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

#[test]
fn minpoly_of_small_matrices() {
    let o = coreset(&["minpoly", "--q", "2", "0,1;0,0", "0,1;1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x^2 (SQR)\nx^2+x+1 (IRR)\n");
    let o = coreset(&["minpoly", "--q", "3", "1,0;0,0", "2,0;0,2"]);
    assert_eq!(stdout(&o), "x^2+2x (SQD)\nx+1 (LIN)\n");
}

#[test]
fn classify_reports_roots_and_size() {
    let o = coreset(&["classify", "--q", "3", "x^2+2x"]);
    assert_eq!(stdout(&o), "x^2+2x (SQD)\nroots: 0 1\nclass size: 12\n");
    let v = json(&["classify", "--q", "4", "x^2+x+2"]);
    assert_eq!(v["kind"], "IRR");
    assert_eq!(v["class_size"], 12);
    assert_eq!(v["roots"], serde_json::json!([]));
}

#[test]
fn classes_cover_the_ring() {
    let v = json(&["classes", "--q", "3"]);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 3 + 3 + 3 + 3);
    let total: u64 = classes.iter().map(|c| c["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 81);
}

#[test]
fn core_test_verdicts() {
    let o = coreset(&["core-test", &data("idempotents.set")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("verdict: NONCORE\n"), "{text}");
    assert!(text.contains("witness: (0,1;0,0)x\n"), "{text}");
    assert!(text.contains("purely core: no\n"), "{text}");

    let v = json(&["core-test", &data("scalars_and_idempotents.set")]);
    assert_eq!(v["core"], true);
    assert_eq!(v["purely_core"], false);
    assert_eq!(v["witness"], Value::Null);
    assert_eq!(v["phi"], "x^2+2x");

    let v = json(&["core-test", &data("empty.set")]);
    assert_eq!(v["core"], true);
    assert_eq!(v["phi"], "1");
    assert_eq!(v["matrices"], 0);
}

#[test]
fn lmodule_and_bset() {
    let o = coreset(&["lmodule", "--q", "3", "--root", "0", "1,0;0,0", "1,1;0,0"]);
    assert!(o.status.success());
    assert_ne!(stdout(&o), "0\n");
    let o = coreset(&["lmodule", "--file", &data("scalars_and_idempotents.set"), "--root", "1"]);
    assert_eq!(stdout(&o), "0\n");

    let o = coreset(&["bset", "--q", "2", "--root", "0", "0,0;0,1"]);
    assert_eq!(stdout(&o), "0,0;0,1\n0,0;1,1\n");
    let v = json(&["bset", "--q", "3", "--root", "1", "--partition", "1,0;0,0"]);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    assert!(cells.iter().all(|c| c["matrices"].as_array().unwrap().len() == 3));
}

#[test]
fn census_with_brute_force() {
    let o = coreset(&["census", "--q", "2", "--brute-force"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("purely core: 10400\n"), "{text}");
    assert!(text.contains("core total: 12452\n"), "{text}");
    assert!(!text.contains("MISMATCH"));

    let v = json(&["census", "--q", "3", "--brute-force"]);
    let sqd: Vec<&Value> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["kind"] == "SQD")
        .collect();
    assert_eq!(sqd.len(), 6);
    assert!(sqd.iter().all(|c| c["noncore"] == "44"));
    assert_eq!(v["rho"]["num"], "1013");
    assert_eq!(v["rho"]["den"], "1024");
}

#[test]
fn census_json_uses_decimal_strings() {
    let v = json(&["census", "--q", "5"]);
    assert!(v["purely_core"].is_string());
    assert!(v["ratio_to_all"]["num"].is_string());
    assert!(v["classes"].as_array().unwrap().iter().all(|c| c["core"].is_string()));
    assert!(v.get("core_total").is_none());
    assert_eq!(v["mismatches"], serde_json::json!([]));
}

#[test]
fn exit_statuses() {
    assert_eq!(coreset(&["minpoly", "--q", "6", "0,0;0,0"]).status.code(), Some(2));
    assert_eq!(coreset(&["minpoly", "--q", "3", "0,0;0"]).status.code(), Some(2));
    assert_eq!(coreset(&["core-test", &data("bad_entry.set")]).status.code(), Some(2));
    assert_eq!(coreset(&["core-test", "/nonexistent/set"]).status.code(), Some(2));
    assert_eq!(
        coreset(&["bset", "--q", "2", "--root", "0", "0,1;0,0"]).status.code(),
        Some(2)
    );
    assert_eq!(coreset(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(coreset(&["census", "--q", "5", "--brute-force"]).status.code(), Some(3));
    assert_eq!(coreset(&["classes", "--q", "17"]).status.code(), Some(3));
    let o = coreset(&["core-test", &data("bad_entry.set")]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn printed_matrices_reparse() {
    let o = coreset(&["bset", "--q", "4", "--root", "0", "--partition", "1,0;0,0"]);
    for line in stdout(&o).lines() {
        let (_, ms) = line.split_once(": ").unwrap();
        for m in ms.split(' ') {
            let back = coreset(&["minpoly", "--q", "4", m]);
            assert!(back.status.success(), "{m}");
            assert_eq!(stdout(&back), "x^2+x (SQD)\n");
        }
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let one = coreset(&["--threads", "1", "census", "--q", "4", "--brute-force"]);
    let four = coreset(&["--threads", "4", "census", "--q", "4", "--brute-force"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn verify_quick_passes() {
    let o = coreset(&["verify-paper"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("12452 core subsets of M2(F2): PASS"));
    assert!(text.contains("B-sets of C(x(x+1)) over F2 (12 fixtures): PASS"));
    assert!(text.ends_with(", 0 failed\n"));
}

#[test]
fn verify_full_passes() {
    let v = json(&["verify-paper", "--level", "full"]);
    assert_eq!(v["failed"], 0);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(checks
        .iter()
        .any(|c| c["name"] == "two-SQD union over F3, exhaustive == structural (129824)"));
}
