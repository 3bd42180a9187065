use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_magicdepth"));
    c.args(args).env_remove("MAGICDEPTH_BUDGET");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("magicdepth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn exact_pauli_on_t_bell() {
    let r = ok(&["exact-pauli", "-i", &data("t_bell.json"), "--pauli", "+XY"]);
    assert_eq!(r["command"], "exact-pauli");
    assert_eq!(r["outputs"]["value"], 1.0);
    assert_eq!(r["outputs"]["exact"]["k"], 0);
    assert_eq!(r["outputs"]["exact"]["octant"], 0);
    assert_eq!(r["inputs_sha256"].as_str().unwrap().len(), 64);
    let z = ok(&["exact-pauli", "-i", &data("t_bell.json"), "--pauli", "XX"]);
    assert!(z["outputs"]["value"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn unknown_flag_is_an_input_error() {
    let out = run(&["exact-pauli", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_inputs_exit_with_two() {
    let missing = run(&["exact-pauli", "-i", "/nonexistent.json", "--pauli", "Z"]);
    assert_eq!(missing.status.code(), Some(2));
    let wrong_width = run(&["exact-pauli", "-i", &data("t_bell.json"), "--pauli", "ZZZ"]);
    assert_eq!(wrong_width.status.code(), Some(2));
    let iqp_as_circuit = run(&["path-amp", "-i", &data("ccz.json"), "--x", "000"]);
    assert_eq!(iqp_as_circuit.status.code(), Some(2));
    let bad_pass = run(&["compile", "--pass", "nonsense"]);
    assert_eq!(bad_pass.status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_with_three() {
    let deep = data("deep.json");
    let out = run(&["path-amp", "-i", &deep, "--x", "01", "--budget", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run_env(&["path-amp", "-i", &deep, "--x", "01"], &[("MAGICDEPTH_BUDGET", "2^2")]);
    assert_eq!(out.status.code(), Some(3));
    let out = run_env(&["path-amp", "-i", &deep, "--x", "01"], &[("MAGICDEPTH_BUDGET", "2^20")]);
    assert!(out.status.success());
}

#[test]
fn path_integral_matches_the_oracle() {
    let deep = data("deep.json");
    let mut norm = 0.0;
    for x in ["00", "01", "10", "11"] {
        let p = ok(&["path-amp", "-i", &deep, "--x", x]);
        let o = ok(&["oracle", "--mode", "amp", "-i", &deep, "--x", x]);
        for part in ["re", "im"] {
            let a = p["outputs"]["value"][part].as_f64().unwrap();
            let b = o["outputs"]["value"][part].as_f64().unwrap();
            assert!((a - b).abs() < 1e-12, "{x} {part}: {a} vs {b}");
            norm += a * a;
        }
        let out = &p["outputs"];
        assert!(out["branches"].as_f64().unwrap() <= out["branch_limit"].as_f64().unwrap());
        assert_eq!(p["counters"]["branches"], out["branches"]);
    }
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn seeded_runs_repeat_across_thread_counts() {
    let c = data("t_bell.json");
    let base = ["estimate", "-i", c.as_str(), "--marginal", "0,1", "--seed", "17", "--eps", "0.1"];
    let a = ok(&[&base[..], &["--threads", "1"]].concat());
    let b = ok(&[&base[..], &["--threads", "4"]].concat());
    let c2 = ok(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(a["outputs"], b["outputs"]);
    assert_eq!(b["inputs_sha256"], c2["inputs_sha256"]);
    assert_eq!(a["seed"], 17);
    let cells = a["outputs"]["value"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    assert!((cells[0].as_f64().unwrap() - 0.5).abs() < 0.1);
}

#[test]
fn replaying_a_record_reproduces_its_outputs() {
    let first = ok(&["marginal", "-i", &data("t_bell.json"), "--qubits", "1", "--samples", "20", "--seed", "5"]);
    let argv: Vec<String> = first["argv"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
    let again = ok(&argv);
    assert_eq!(first["outputs"], again["outputs"]);
    assert_eq!(first["inputs_sha256"], again["inputs_sha256"]);
    assert_eq!(first["outputs"]["samples"].as_array().unwrap().len(), 20);
}

#[test]
fn estimates_agree_with_the_oracle() {
    let c = data("t_bell.json");
    let e = ok(&["estimate", "-i", &c, "--pauli", "-XY", "--seed", "2"]);
    assert!((e["outputs"]["value"].as_f64().unwrap() + 1.0).abs() < 0.05);
    assert!(e["counters"]["samples"].as_u64().unwrap() > 0);
    let p = ok(&["estimate", "-i", &c, "--prob", "11", "--samples-override", "4000"]);
    assert_eq!(p["outputs"]["samples_used"].as_u64().unwrap() / 100, 40);
    let a = ok(&["estimate", "-i", &c, "--amp", "11"]);
    let o = ok(&["oracle", "--mode", "amp", "-i", &c, "--x", "11"]);
    let im = |v: &Value| v["outputs"]["value"]["im"].as_f64().unwrap();
    assert!((im(&a) - im(&o)).abs() < 0.05);
    let q = ok(&["estimate", "-i", &c, "--marginal", "1", "--outcome", "0"]);
    assert!((q["outputs"]["value"].as_f64().unwrap() - 0.5).abs() < 0.05);
}

#[test]
fn hadamard_test_pipeline() {
    let h = tmp("htest.json");
    let r = ok(&["compile", "--pass", "htest", "-i", &data("ccz.json"), "-o", &h]);
    assert_eq!(r["outputs"]["observable"], "+ZIII");
    let z = ok(&["oracle", "--mode", "pauli", "-i", &h, "--pauli", "ZIII"]);
    assert_eq!(z["outputs"]["value"], 0.75);
    let brute = ok(&["oracle", "--mode", "iqp3", "-i", &data("ccz.json")]);
    assert_eq!(brute["outputs"]["value"], 0.75);

    let report = tmp("report.json");
    let c2 = ok(&["compile", "--pass", "htest-compile:t-depth2", "-i", &h, "--report", &report]);
    assert_eq!(c2["outputs"]["report"]["depth_after"], 2);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved, c2["outputs"]["report"]);
    assert!(c2["outputs"]["circuit"]["gates"].is_array());
    let c1 = ok(&["compile", "--pass", "htest-compile:thalf-depth1", "-i", &h]);
    assert_eq!(c1["outputs"]["report"]["depth_after"], 1);
    assert_eq!(run(&["compile", "--pass", "htest-compile:other", "-i", &h]).status.code(), Some(2));
}

#[test]
fn synthesis_passes() {
    let ccz = ok(&["compile", "--pass", "ccz"]);
    assert_eq!(ccz["outputs"]["t_count"], 7);
    let ckz = ok(&["compile", "--pass", "ckz:1,3"]);
    assert_eq!(ckz["outputs"]["report"]["depth_after"], 1);
    let clz = ok(&["compile", "--pass", "clz:2,1"]);
    assert_eq!(clz["outputs"]["n"], 4);
    assert_eq!(run(&["compile", "--pass", "ckz:3"]).status.code(), Some(2));

    let td1 = tmp("td1.json");
    let r = ok(&["compile", "--pass", "iqp3-td1", "-i", &data("ccz.json"), "-o", &td1]);
    assert_eq!(r["outputs"]["report"]["depth_after"], 1);
    let n = r["outputs"]["n"].as_u64().unwrap() as usize;
    let amp = ok(&["path-amp", "-i", &td1, "--x", &"0".repeat(n)]);
    assert!((amp["outputs"]["value"]["re"].as_f64().unwrap() - 0.75).abs() < 1e-12);

    let one = tmp("one.json");
    let net = tmp("net.json");
    std::fs::write(&net, serde_json::to_string(&ccz["outputs"]["circuit"]).unwrap()).unwrap();
    let r = ok(&["compile", "--pass", "d-one-layer", "-i", &net, "-o", &one, "--d-gate", "T"]);
    assert_eq!(r["outputs"]["report"]["depth_after"], 1);
    let par = ok(&["compile", "--pass", "parallelize", "-i", &data("diag.json")]);
    assert_eq!(par["outputs"]["report"]["depth_after"], 1);
    assert_eq!(run(&["compile", "--pass", "parallelize", "-i", &net]).status.code(), Some(2));
}

#[test]
fn distribution_and_bench() {
    let d = ok(&["oracle", "--mode", "dist", "-i", &data("t_bell.json"), "--qubits", "1"]);
    assert_eq!(d["outputs"]["probabilities"], serde_json::json!([0.5, 0.5]));
    let b = ok(&["bench", "scaling", "--op", "inner-product", "--n", "8..32"]);
    let rows = b["outputs"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["n"], 32);
    assert!(rows[0]["ratio"].is_null());
    assert!(rows[1]["ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_runs_named_criteria() {
    let v = ok(&["verify", "9"]);
    assert_eq!(v["outputs"]["failed"], 0);
    assert_eq!(v["outputs"]["outcomes"][0]["passed"], true);
    assert_eq!(run(&["verify", "42"]).status.code(), Some(2));
}
