use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use zsfusion::fusring::{group_ring, rep_ring, tambara_yamagami};
use zsfusion::{io, suite};

fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

/// Runs the binary with `--json --no-timings` and returns the exit code and
/// the parsed report.
fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_zsfusion"))
        .args(["--json", "--no-timings"])
        .args(args)
        .output()
        .expect("run the binary");
    let report = serde_json::from_slice(&out.stdout).expect("one JSON report on stdout");
    (out.status.code().unwrap(), report)
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn valid_s3_pair_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s3.json", &io::matched_pair_json(&suite::s3_pair()));
    let (code, report) = run(&["verify", arg(&p)]);
    assert_eq!(code, 0);
    assert_eq!(report["status"], "pass");
    assert_eq!(report["findings"], json!([]));
    assert_eq!(report["details"]["kind"], "matched-pair");
    assert!(report["ms"].is_null());
}

#[test]
fn corrupted_ring_is_a_violation_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut ring = rep_ring(&suite::symmetric3()).unwrap();
    ring.set_n(2, 2, 1, 0);
    let p = write(dir.path(), "bad.json", &io::fusion_ring_json(&ring));
    let (code, report) = run(&["verify", "--kind", "fusion-ring", arg(&p)]);
    assert_eq!(code, 1);
    assert_eq!(report["status"], "violation");
    let findings = report["findings"].as_array().unwrap();
    assert!(!findings.is_empty());
    assert!(findings.iter().all(|f| !f["witness"].as_array().unwrap().is_empty()));
}

#[test]
fn malformed_and_missing_inputs_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("mal.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(run(&["verify", arg(&p)]).0, 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["verify", arg(&missing)]).0, 2);
    let unknown = write(dir.path(), "unknown.json", &json!({"foo": 1}));
    assert_eq!(run(&["verify", arg(&unknown)]).0, 2);
}

#[test]
fn theorem1_passes_on_s3_and_rejects_invalid_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s3.json", &io::matched_pair_json(&suite::s3_pair()));
    let (code, report) = run(&["theorem1", arg(&p)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["bijection"].as_array().unwrap().len(), 3);

    let mut bad = suite::s3_pair();
    let v = bad.ract(1, 1);
    bad.set_ract(1, 1, (v + 1) % 2);
    let p = write(dir.path(), "bad.json", &io::matched_pair_json(&bad));
    let (code, report) = run(&["theorem1", arg(&p)]);
    assert_eq!(code, 2);
    assert_eq!(report["status"], "input-error");
}

#[test]
fn compare_reports_isomorphism_and_its_absence() {
    let dir = tempfile::tempdir().unwrap();
    let q8 = write(dir.path(), "q8.json", &io::fusion_ring_json(&rep_ring(&suite::quaternion8()).unwrap()));
    let d8 = write(dir.path(), "d8.json", &io::fusion_ring_json(&rep_ring(&suite::dihedral8()).unwrap()));
    let (code, report) = run(&["compare", arg(&q8), arg(&d8)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["isomorphic"], true);

    let z4 = write(dir.path(), "z4.json", &io::fusion_ring_json(&group_ring(&suite::cyclic(4))));
    let v4 = write(dir.path(), "v4.json", &io::fusion_ring_json(&group_ring(&suite::klein4())));
    assert_eq!(run(&["compare", arg(&z4), arg(&v4)]).0, 1);
}

#[test]
fn group_pipeline_commands_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let s3 = write(dir.path(), "s3.json", &json!({"permutations": [[2, 1, 3], [2, 3, 1]]}));
    let (code, report) = run(&["factorize", arg(&s3)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["factorizations"].as_array().unwrap().len(), 8);

    let mp = dir.path().join("mp.json");
    let (code, _) = run(&["derive", arg(&s3), "--g", "(1 2)", "--gamma", "(1 2 3)", "--out", arg(&mp)]);
    assert_eq!(code, 0);
    let (code, report) = run(&["zappa", arg(&mp)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["order"], 6);
    let (code, report) = run(&["equivariantize", arg(&mp)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["mode"], "pointed");
    let (code, report) = run(&["dual-gt", arg(&s3), "--h", "(1 2)"]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["simples"].as_array().unwrap().len(), 3);

    // Two subgroups of order three do not factor S3.
    let (code, report) = run(&["derive", arg(&s3), "--g", "(1 2 3)", "--gamma", "(1 3 2)"]);
    assert_eq!(code, 1);
    assert_eq!(report["status"], "violation");
}

#[test]
fn crossed_actions_bicross_and_fall_back_to_the_census() {
    let dir = tempfile::tempdir().unwrap();
    let d = suite::ty_inversion(&suite::cyclic(3)).unwrap();
    let p = write(dir.path(), "ty.json", &io::crossed_action_json(&d));
    assert_eq!(run(&["verify", arg(&p)]).0, 0);
    let (code, report) = run(&["bicross", arg(&p)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["ring"]["rank"], 8);
    let (code, report) = run(&["equivariantize", arg(&p)]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["mode"], "census");
    assert_eq!(report["details"]["consistent"], true);
    assert!(tambara_yamagami(&suite::cyclic(3)).is_ok());
}

#[test]
fn json_output_is_reproducible_across_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "a4.json", &io::matched_pair_json(&suite::a4_pair()));
    let outputs: Vec<Value> = ["0", "1", "2"]
        .iter()
        .map(|s| {
            let (code, mut r) = run(&["--seed", s, "theorem1", arg(&p)]);
            assert_eq!(code, 0);
            r["details"].as_object_mut().unwrap().remove("extension_simples");
            r
        })
        .collect();
    assert_eq!(outputs[0]["details"]["extension_ring"], outputs[1]["details"]["extension_ring"]);
    assert_eq!(outputs[0]["details"]["dual_ring"], outputs[2]["details"]["dual_ring"]);
}
