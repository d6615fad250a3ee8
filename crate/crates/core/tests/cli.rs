use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_gybe");

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn gybe(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("GYBE_FIELD_ORDER")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn demo_jk6_reproduces_the_example() {
    let out = gybe(&["demo", "jk6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["matches_printed"], true);
    assert_eq!(r["eigenvalues"]["count"], 3);
    // e^{2πi/3}, e^{4πi/3}, e^{5πi/3}
    let decimal = r["eigenvalues"]["certified_decimal"].as_array().unwrap();
    let angles: Vec<f64> = decimal
        .iter()
        .map(|z| {
            let a = z[1].as_f64().unwrap().atan2(z[0].as_f64().unwrap());
            (a.rem_euclid(std::f64::consts::TAU) / std::f64::consts::PI * 3.0).round()
        })
        .collect();
    assert_eq!(angles, [2.0, 4.0, 5.0]);
}

#[test]
fn demo_ising_passes() {
    let out = gybe(&["demo", "ising"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["matches_printed"], true);
}

#[test]
fn demo_output_is_deterministic() {
    assert_eq!(gybe(&["demo", "jk6"]).stdout, gybe(&["demo", "jk6"]).stdout);
}

#[test]
fn generated_ring_validates_with_five_labels() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("so3.json");
    let out = gybe(&[
        "gen-so",
        "--r",
        "1",
        "--relabel",
        "jk",
        "--out",
        path(&file),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = gybe(&["validate", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["labels"].as_array().unwrap().len(), 5);
    assert_eq!(r["fp_dimensions"]["2"]["exact"], 2);
}

#[test]
fn gen_so_prints_a_ring_file() {
    let out = gybe(&["gen-so", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    // 1, Z, Xeps, Xeps', X1, X2
    assert_eq!(r["labels"].as_array().unwrap().len(), 6);
}

#[test]
fn find_gybe_on_so5() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("so5.json");
    gybe(&["gen-so", "--r", "2", "--out", path(&file)]);
    let out = gybe(&["find-gybe", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let certs = report(&out)["certificates"].as_array().unwrap().clone();
    assert_eq!(certs.len(), 2);
    for c in &certs {
        assert_eq!(c["set"], serde_json::json!(["Xeps", "Xeps'"]));
        assert_eq!(c["dimension_integral"], true);
    }
}

#[test]
fn build_then_verify_then_group_order() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.json");
    let out = gybe(&[
        "build-r",
        &data("jk6.json"),
        "--object",
        "2",
        "--set",
        "1,3",
        "--out",
        path(&r),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = gybe(&[
        "verify",
        path(&r),
        "--d",
        "2",
        "--m",
        "3",
        "--far-comm",
        "--braid-rep",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"], true);
    let out = gybe(&[
        "group-order",
        path(&r),
        "--d",
        "2",
        "--n",
        "3",
        "--projective",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["result"].is_u64());
    let out = gybe(&[
        "eigs",
        path(&r),
        "--category",
        &data("jk6.json"),
        "--object",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["count"], 3);
}

#[test]
fn random_matrix_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("random.json");
    // a fixed pseudo-random invertible integer matrix
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut entries = Vec::new();
    for k in 0..64 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let v = (state % 7) as i64 - 3 + if k % 9 == 0 { 20 } else { 0 };
        entries.push(serde_json::json!([{"p": v, "q": 1, "k": 0}]));
    }
    let m = serde_json::json!({"cyclotomic_order": 24, "rows": 8, "cols": 8, "entries": entries});
    std::fs::write(&file, m.to_string()).unwrap();
    let out = gybe(&["verify", path(&file), "--d", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"], false);
    assert_eq!(
        r["checks"][0]["witness"]["indices"]
            .as_array()
            .unwrap()
            .len(),
        3
    );
}

#[test]
fn usage_and_data_errors_exit_two() {
    let out = gybe(&["verify", "/nonexistent/r.json", "--d", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
    assert_eq!(gybe(&["demo", "nope"]).status.code(), Some(2));
    assert_eq!(
        gybe(&[
            "verify",
            &data("jk6_printed_r.json"),
            "--d",
            "3",
            "--m",
            "3"
        ])
        .status
        .code(),
        Some(2)
    );
    let out = gybe(&[
        "build-r",
        &data("jk6.json"),
        "--object",
        "2",
        "--set",
        "0,4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn field_order_variable() {
    let out = Command::new(BIN)
        .args([
            "build-r",
            &data("ising.json"),
            "--object",
            "1,psi",
            "--set",
            "1,psi",
        ])
        .env("GYBE_FIELD_ORDER", "48")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["matrix"]["cyclotomic_order"], 48);
    let out = Command::new(BIN)
        .args(["demo", "jk6"])
        .env("GYBE_FIELD_ORDER", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pretty_table_goes_to_stderr() {
    let out = gybe(&["--pretty", "demo", "jk6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("matches printed matrix: true"));
    report(&out);
}
