use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn wedgelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wedgelab"))
        .args(args)
        .env_remove("WEDGELAB_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn expand_delta_csv() {
    let o = wedgelab(&["expand", "--form", "delta", "--prec", "100", "--out", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 100);
    assert_eq!(lines[0], "1,1,0");
    assert_eq!(lines[1], "2,-24,0");
    assert_eq!(lines[2], "3,252,0");
    assert!(lines[99].starts_with("100,"));
}

#[test]
fn precision_env_default() {
    let o = Command::new(env!("CARGO_BIN_EXE_wedgelab"))
        .args(["expand", "--form", "eta11"])
        .env("WEDGELAB_PREC", "17")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 17);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["expand", "--form", "eta4_6", "--prec", "200", "--out", "json"][..],
        &["hecke", "--form", "delta", "--p", "3", "--j", "3", "--out", "json"][..],
        &["scan", "--form", "eta11", "--prec", "500", "--out", "csv"][..],
        &["shimura", "--form", "synth6", "--prec", "150", "--out", "json", "--s", "12"][..],
    ] {
        let a = wedgelab(args);
        let b = wedgelab(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn precision_prefix() {
    for form in ["delta", "eta14", "theta_m4", "synth6"] {
        let small = stdout(&wedgelab(&["expand", "--form", form, "--prec", "40"]));
        let big = stdout(&wedgelab(&["expand", "--form", form, "--prec", "120"]));
        assert!(big.starts_with(&small), "{form}");
        assert!(big.len() > small.len());
    }
}

#[test]
fn tau_power_of_two_scan() {
    let o = wedgelab(&[
        "scan", "--form", "delta", "--subseq", "p-power", "--p", "2", "--j", "1", "--theta1", "-0.5", "--theta2",
        "0.5", "--prec", "1048576",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    let escapes: Vec<u64> = v["escapes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(escapes.iter().filter(|&&n| n <= 20).count() >= 3);
    assert_eq!(v["summary"]["scanned"], 20);
}

#[test]
fn scan_csv_input_and_strict_wedge() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "n,re,im\n1,1,0\n2,0,0\n3,-2,0\n4,5,0").unwrap();
    let path = f.path().to_str().unwrap();
    let loose = json(&wedgelab(&["scan", "--input", path, "--theta1", "-1", "--theta2", "1"]));
    let strict = json(&wedgelab(&["scan", "--input", path, "--theta1", "-1", "--theta2", "1", "--strict-wedge"]));
    assert_eq!(loose["escapes"], serde_json::json!([3]));
    assert_eq!(strict["escapes"], serde_json::json!([2, 3]));
    // zeros are skipped when counting sign changes
    assert_eq!(loose["re_sign_changes"], serde_json::json!([[1, 3], [3, 4]]));
    let csv = stdout(&wedgelab(&["scan", "--input", path, "--theta1", "-1", "--theta2", "1", "--out", "csv"]));
    assert_eq!(csv, "escape,3,3\nre_change,1,3\nre_change,3,4\n");
}

#[test]
fn exit_codes() {
    assert_eq!(wedgelab(&["expand", "--form", "nosuchform"]).status.code(), Some(2));
    assert_eq!(wedgelab(&["expand"]).status.code(), Some(2));
    assert_eq!(wedgelab(&["verify", "--suite", "nosuch"]).status.code(), Some(2));
    assert_eq!(wedgelab(&["frobnicate"]).status.code(), Some(2));
    // computational failures: a half-integral form has no T(p) data, p^j beyond precision
    assert_eq!(wedgelab(&["hecke", "--form", "theta_m4", "--p", "3"]).status.code(), Some(1));
    assert_eq!(wedgelab(&["expand", "--form", "{\"type\":\"eta_quotient\",\"factors\":[[1,2]]}"]).status.code(), Some(1));
    assert_eq!(wedgelab(&["verify", "--suite", "wedge"]).status.code(), Some(0));
}

#[test]
fn hecke_suite_names_failing_check() {
    let o = wedgelab(&["verify", "--suite", "hecke", "--out", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["suite"], "hecke");
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"hecke.lemma1-equivalence"));
    for c in v["checks"].as_array().unwrap() {
        assert!(c["millis"].is_u64() && c["detail"].is_string());
    }
}

#[test]
fn shimura_suite_has_roundtrip_block() {
    let o = wedgelab(&["verify", "--suite", "shimura", "--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"shimura.mobius-roundtrip"));
}

#[test]
fn inline_json_spec_and_catalog() {
    let spec = r#"{"type":"eta_quotient","factors":[[1,2],[11,2]]}"#;
    let a = stdout(&wedgelab(&["expand", "--form", spec, "--prec", "30"]));
    let b = stdout(&wedgelab(&["expand", "--form", "eta11", "--prec", "30"]));
    assert_eq!(a, b);
    let cat = json(&wedgelab(&["catalog", "--out", "json"]));
    let names: Vec<&str> = cat.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["delta", "eta11", "eta4_6", "eta8_3", "synth6"] {
        assert!(names.contains(&n));
    }
}

#[test]
fn shimura_csv_and_context_json() {
    let csv = stdout(&wedgelab(&["shimura", "--form", "eta8_3", "--prec", "400", "--seq", "b"]));
    let first: Vec<&str> = csv.lines().take(3).collect();
    assert_eq!(first, ["1,1,0", "2,0,0", "3,-3,0"]);
    let v = json(&wedgelab(&["shimura", "--form", "eta8_3", "--prec", "400", "--out", "json"]));
    assert_eq!(v["t"], 1);
    assert_eq!(v["k"], 1);
    assert_eq!(v["level"], 64);
    assert_eq!(v["provenance"]["kind"], "catalog");
    assert_eq!(v["nonzero_witness"], 1);
}

#[test]
fn analyze_reports_ladder() {
    let v = json(&wedgelab(&["analyze", "--form", "delta", "--prec", "2000", "--normalize", "--lchi-s", "2"]));
    let ladder = v["abscissa"]["ladder"].as_array().unwrap();
    assert_eq!(ladder.len(), 8);
    assert!(v["abscissa"]["estimate"].is_f64());
    assert!(v["l_chi"]["tail_bound"].as_f64().unwrap() > 0.0);
}
