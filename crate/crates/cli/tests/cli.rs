//! End-to-end runs of the binary: outputs, exit codes and manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

fn ring(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../rings").join(name)
}

fn gradop(out: &Path, args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_gradop"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("spawn gradop");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn manifest(out: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(out.join("manifest.json")).expect("manifest written");
    serde_json::from_str(&text).unwrap()
}

/// Every output file by relative path; the manifest without its timing.
fn snapshot(dir: &Path) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
                continue;
            }
            let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
            let mut text = std::fs::read_to_string(&p).unwrap();
            if rel == "manifest.json" {
                let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
                v.as_object_mut().unwrap().remove("timing_ms");
                text = v.to_string();
            }
            files.insert(rel, text);
        }
    }
    files
}

#[test]
fn ops_fermat_cone_has_no_negative_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ring("fermat4.ring");
    let (code, _) = gradop(tmp.path(), &["ops", "--ring", r.to_str().unwrap(), "--order-max", "3", "--degree-min", "-3", "--degree-max", "1"]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(tmp.path().join("ops.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("m,e=-3,e=-2,e=-1,e=0,e=1"));
    let rows: Vec<Vec<u64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(&row[1..4], &[0, 0, 0], "{row:?}");
        assert!(row[4] >= 1);
    }
    let m = manifest(tmp.path());
    assert_eq!(m["status"], "ok");
    assert_eq!(m["field"], "Q");
}

#[test]
fn vanish_cubic_writes_verified_certificates() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, stdout) = gradop(tmp.path(), &["vanish", "--ambient", "3", "--degree", "3", "--sym-max", "6"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("H⁰(X, Sym^m T_X) = 0 certified for m = 1..6"), "{stdout}");
    for m in 1..=6 {
        assert!(tmp.path().join(format!("certificates/m{m:02}.json")).exists());
    }
    let summary = std::fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
    assert!(summary.contains("certified for m = 1..6"));
}

#[test]
fn vanish_quadric_stays_unknown() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, stdout) = gradop(tmp.path(), &["vanish", "--degree", "2", "--sym-max", "3"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("unknown for m = "), "{stdout}");
    assert!(!tmp.path().join("certificates/m01.json").exists());
}

#[test]
fn fedder_table() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = gradop(tmp.path(), &["fedder", "--poly", "x^3+y^3+z^3", "--primes", "5,7,11,13"]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(tmp.path().join("fedder.csv")).unwrap();
    let verdicts: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(verdicts, ["false", "true", "false", "true"]);
}

#[test]
fn json_format() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = gradop(tmp.path(), &["--format", "json", "pn-coh", "--ambient", "3", "--sym-max", "2", "--twist-min", "-1", "--twist-max", "1"]);
    assert_eq!(code, 0);
    let text = std::fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "json") && !p.ends_with("manifest.json"))
        .map(|p| std::fs::read_to_string(p).unwrap())
        .expect("table written");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.is_array() || v.is_object());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ring("quadric.ring");
    let args = ["ops", "--ring", r.to_str().unwrap(), "--order-max", "2", "--degree-min", "-2", "--degree-max", "0"];
    assert_eq!(gradop(tmp.path(), &args).0, 0);
    let first = snapshot(tmp.path());
    assert_eq!(gradop(tmp.path(), &args).0, 0);
    assert_eq!(first, snapshot(tmp.path()));

    let vtmp = tempfile::tempdir().unwrap();
    let vargs = ["vanish", "--degree", "3", "--sym-max", "3"];
    gradop(vtmp.path(), &vargs);
    let first = snapshot(vtmp.path());
    gradop(vtmp.path(), &vargs);
    assert_eq!(first, snapshot(vtmp.path()));
}

#[test]
fn inhomogeneous_relation_is_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.ring");
    std::fs::write(&bad, "field = \"Q\"\nvars = [\"x\", \"y\"]\nrelations = [\"x^2 - y\"]\n").unwrap();
    let out = tmp.path().join("out");
    let (code, _) = gradop(&out, &["ops", "--ring", bad.to_str().unwrap(), "--order-max", "1", "--degree-min", "-1"]);
    assert_eq!(code, 1);
    let m = manifest(&out);
    assert_eq!(m["exit_code"], 1);
    assert_eq!(m["status"], "input-error");
    assert!(m["message"].as_str().unwrap().contains("bad.ring:3:"), "{m}");
}

#[test]
fn weights_and_syntax_errors_are_located() {
    let tmp = tempfile::tempdir().unwrap();
    let weighted = tmp.path().join("w.ring");
    std::fs::write(&weighted, "vars = [\"x\", \"y\"]\nrelations = [\"x*y\"]\nweights = [1, 2]\n").unwrap();
    let (code, _) = gradop(tmp.path(), &["ops", "--ring", weighted.to_str().unwrap(), "--order-max", "1", "--degree-min", "-1"]);
    assert_eq!(code, 1);
    assert!(manifest(tmp.path())["message"].as_str().unwrap().contains("weight"));

    let garbled = tmp.path().join("g.ring");
    std::fs::write(&garbled, "vars = [\"x\", \"y\"]\nrelations = [\"x*y +\"]\n").unwrap();
    let (code, _) = gradop(tmp.path(), &["ops", "--ring", garbled.to_str().unwrap(), "--order-max", "1", "--degree-min", "-1"]);
    assert_eq!(code, 1);
    assert!(manifest(tmp.path())["message"].as_str().unwrap().contains("g.ring:2:"));
}

#[test]
fn bounds_over_cap_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ring("bgg.ring");
    let (code, _) = gradop(tmp.path(), &["ops", "--ring", r.to_str().unwrap(), "--order-max", "33", "--degree-min", "-1"]);
    assert_eq!(code, 1);
    let (code, _) = gradop(tmp.path(), &["vanish", "--degree", "3", "--sym-max", "65"]);
    assert_eq!(code, 1);
    assert_eq!(manifest(tmp.path())["exit_code"], 1);
}

#[test]
fn missing_file_and_bad_flags_still_write_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    let (code, _) = gradop(&out, &["ops", "--ring", "/nonexistent.ring", "--order-max", "1", "--degree-min", "-1"]);
    assert_eq!(code, 1);
    assert_eq!(manifest(&out)["status"], "input-error");

    let out = tmp.path().join("b");
    let (code, _) = gradop(&out, &["ops", "--order-max", "1"]);
    assert_eq!(code, 1);
    let m = manifest(&out);
    assert_eq!(m["exit_code"], 1);
    assert!(m["command"].is_null());
}

#[test]
fn prime_field_tangent_table_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _) = gradop(tmp.path(), &["pn-coh", "--ambient", "3", "--bundle", "tangent", "--twist-min", "0", "--twist-max", "0", "--field", "F5"]);
    assert_eq!(code, 1);
}
