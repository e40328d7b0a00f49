use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_asm-verify")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn result<'a>(doc: &'a Value, id: &str) -> &'a Value {
    doc["results"].as_array().unwrap().iter().find(|r| r["id"] == id).unwrap()
}

#[test]
fn p3_example() {
    let (code, out, _) = run(&["--p", "3", "--e", "1", "--c", "1", "--samples", "60"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let pc = result(&doc, "points.affine_fq2");
    assert_eq!((pc["expected"].as_u64(), pc["observed"].as_u64(), pc["status"].as_str()), (Some(18), Some(18), Some("pass")));
    let go = result(&doc, "group.order");
    assert_eq!((go["expected"].as_u64(), go["observed"].as_u64(), go["status"].as_str()), (Some(36), Some(36), Some("pass")));
    assert_eq!(doc["params"]["q"], 3);
    assert_eq!(doc["summary"]["fail"], 0);
    for key in ["determinism_hash", "params", "results", "seed", "summary", "timing", "version"] {
        assert!(doc.get(key).is_some(), "{key}");
    }
}

#[test]
fn char2_reports_special_multiplicity() {
    let (code, out, _) = run(&["--p", "2", "--e", "2", "--c", "1", "--format", "json", "--samples", "60"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(result(&doc, "group.order")["expected"], 96);
    assert_eq!(result(&doc, "osculation.special_multiplicity")["status"], "reported");
}

#[test]
fn invalid_configs_exit_2() {
    let (code, out, err) = run(&["--p", "4"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("invalid configuration"));
    assert_eq!(run(&["--p", "3", "--c", "0"]).0, 2);
    assert_eq!(run(&["--p", "3", "--checks", "nonsense"]).0, 2);
    assert_eq!(run(&["--p", "3", "--precision", "2"]).0, 2);
    assert_eq!(run(&["--p", "3", "--format", "xml"]).0, 2);
}

#[test]
fn identical_runs_are_byte_identical_apart_from_timing() {
    let args = ["--p", "5", "--checks", "points,osculation,model", "--samples", "50"];
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        serde_json::to_string(&v).unwrap()
    };
    let (a, b) = (run(&args).1, run(&args).1);
    assert_eq!(strip(&a), strip(&b));
    let other = run(&["--p", "5", "--checks", "points,osculation,model", "--samples", "50", "--seed", "7"]).1;
    let hash = |s: &str| serde_json::from_str::<Value>(s).unwrap()["determinism_hash"].clone();
    assert_eq!(hash(&a), hash(&b));
    assert_ne!(hash(&a), hash(&other));
}

#[test]
fn markdown_and_out_file() {
    let dir = std::env::temp_dir().join(format!("asm-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.md");
    let (code, out, _) = run(&[
        "--p", "2", "--checks", "points,genus", "--format", "markdown", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let md = std::fs::read_to_string(&path).unwrap();
    assert!(md.contains("| points.affine_fq2 | pass |"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn coefficient_list_for_c() {
    // c = generator of F_{3^4}: not in F_q, so rationality checks are reported
    let (code, out, _) = run(&["--p", "3", "--c", "0,1", "--checks", "points,frobenius,zrep", "--samples", "20"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["params"]["c_coeffs"], serde_json::json!([0, 1]));
    assert_eq!(result(&doc, "points.affine_fq2")["status"], "reported");
    assert_eq!(result(&doc, "frobenius.conic_image")["mode"], "skipped");
}
