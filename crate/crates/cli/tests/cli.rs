use std::path::PathBuf;
use std::process::{Command, Output};

use g2trac_core::family::{qm_package, FamilyParams};
use g2trac_core::json::{tensor_from_json, TensorJson};

fn g2trac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2trac"))
        .args(args)
        .env_remove("G2TRAC_SAMPLES")
        .output()
        .expect("runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("g2trac-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn verify_family_passes_and_json_is_stable() {
    let a = g2trac(&["verify-family", "--m", "1/2", "--report", "json"]);
    let b = g2trac(&["verify-family", "--m", "1/2", "--report", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let first = &v["entries"][0];
    assert_eq!(first["name"], "jacobi");
    assert!(first["residual_max_degree"].is_null());
    assert_eq!(first["pass"], true);
    assert!(v["zero_locus"].as_array().unwrap().iter().all(|e| e["pass"] == true));
}

#[test]
fn text_report_has_runtime() {
    let o = g2trac(&["verify-family", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("PASS  phi_parallel"));
    assert!(out.contains("runtime:"));
}

#[test]
fn samples_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_g2trac"))
        .args(["verify-family", "--m", "-1", "--report", "json"])
        .env("G2TRAC_SAMPLES", "3, -1/3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["samples"], serde_json::json!(["3", "-1/3"]));
    let bad = Command::new(env!("CARGO_BIN_EXE_g2trac"))
        .args(["verify-family", "--m", "2"])
        .env("G2TRAC_SAMPLES", "1,zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn invalid_parameters() {
    for m in ["1", "0", "x", "1/0"] {
        assert_eq!(code(&g2trac(&["verify-family", "--m", m])), 2, "m = {m}");
    }
    assert_eq!(code(&g2trac(&["verify-family"])), 2);
    assert_eq!(code(&g2trac(&["orbit", "--m", "1/2"])), 2);
}

#[test]
fn definite_model() {
    let o = g2trac(&["verify-family", "--model", "definite"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("signature_7_0"));
}

#[test]
fn orbit_sides() {
    let minus = stdout(&g2trac(&["orbit", "--m", "1/2", "--s", "-2"]));
    assert!(
        minus.contains("orbit M-") && minus.contains("g signature (3,3)"),
        "{minus}"
    );
    let zero = g2trac(&["orbit", "--m", "7/12", "--s", "0", "--report", "json"]);
    assert_eq!(code(&zero), 0);
    let v: serde_json::Value = serde_json::from_slice(&zero.stdout).unwrap();
    assert_eq!(v["orbit"], "M0");
    assert_eq!(v["growth"], serde_json::json!([2, 3, 5]));
    let plus: serde_json::Value =
        serde_json::from_slice(&g2trac(&["orbit", "--m", "3", "--s", "1/2", "--report", "json"]).stdout).unwrap();
    assert_eq!((plus["orbit"].as_str(), plus["eps"].as_i64()), (Some("M+"), Some(-1)));
}

#[test]
fn monge() {
    assert_eq!(code(&g2trac(&["monge-check", "--poly", "q^2 + p^3"])), 0);
    assert_eq!(code(&g2trac(&["monge-check", "--poly", "q"])), 1);
    assert_eq!(code(&g2trac(&["monge-check", "--poly", "q^"])), 2);
    let o = g2trac(&["monge-check", "--poly", "q^3", "--report", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["samples"][0]["growth"], serde_json::json!([2, 3, 5]));
    assert_eq!(v["is235"], false);
}

#[test]
fn export_round_trips() {
    let o = g2trac(&["export", "--m", "5/6", "--what", "phi"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with(r#"{"dim":7,"valence":[0,3],"alt":true,"param":"rho","entries":[{"idx":[1,2,3]"#));
    let tj: TensorJson = serde_json::from_str(&text).unwrap();
    let pkg = qm_package(&FamilyParams::parse("5/6").unwrap()).unwrap();
    assert_eq!(tensor_from_json(&tj).unwrap(), pkg.phi);
}

#[test]
fn classify_forms() {
    let phi = stdout(&g2trac(&["export", "--model", "definite", "--what", "phi"]));
    let f = temp_file("phi.json", &phi);
    let o = g2trac(&["classify-form", "--file", f.to_str().unwrap(), "--report", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "definite");
    assert_eq!(v["signature"], serde_json::json!([7, 0]));
    assert_eq!(
        code(&g2trac(&["classify-form", "--file", f.to_str().unwrap(), "--dim", "6"])),
        2
    );

    let one = r#"["1","0","0","0"]"#;
    let split6 = format!(
        r#"{{"dim":6,"valence":[0,3],"alt":true,"entries":[{{"idx":[1,2,3],"coeff":[{one}]}},{{"idx":[4,5,6],"coeff":[{one}]}}]}}"#
    );
    let f6 = temp_file("b1.json", &split6);
    let o = g2trac(&[
        "classify-form",
        "--file",
        f6.to_str().unwrap(),
        "--dim",
        "6",
        "--report",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["class"].as_str(), v["eps"].as_i64()), (Some("beta1"), Some(1)));

    let degenerate = format!(r#"{{"dim":7,"valence":[0,3],"alt":true,"entries":[{{"idx":[1,2,3],"coeff":[{one}]}}]}}"#);
    let fd = temp_file("deg.json", &degenerate);
    assert_eq!(code(&g2trac(&["classify-form", "--file", fd.to_str().unwrap()])), 2);

    let unsorted = format!(r#"{{"dim":7,"valence":[0,3],"alt":true,"entries":[{{"idx":[3,2,1],"coeff":[{one}]}}]}}"#);
    let fu = temp_file("unsorted.json", &unsorted);
    assert_eq!(code(&g2trac(&["classify-form", "--file", fu.to_str().unwrap()])), 2);
    assert_eq!(code(&g2trac(&["classify-form", "--file", "/nonexistent/form.json"])), 2);
    for p in [f, f6, fd, fu] {
        let _ = std::fs::remove_file(p);
    }
}
