use std::process::{Command, Output};

use serde_json::Value;

use arctic_kernel::extended_kernel::{gap_probability, AztecKernel, GapSpec};

fn arctic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arctic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn sampling_is_deterministic() {
    let a = arctic(&["sample", "--n", "12", "--seed", "42"]);
    let b = arctic(&["sample", "--n", "12", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(
        a.stdout,
        arctic(&["sample", "--n", "12", "--seed", "43"]).stdout
    );
    let v = json(&a);
    assert_eq!(v["schema"], "arctic-kernel/1");
    assert_eq!(v["command"], "sample");
    assert_eq!(v["seed"], 42);
}

#[test]
fn order_one_has_two_dominoes() {
    let v = json(&arctic(&["sample", "--n", "1"]));
    assert_eq!(v["result"]["dominoes"].as_array().unwrap().len(), 2);
}

#[test]
fn frozen_fraction_at_order_64() {
    let v = json(&arctic(&["sample", "--n", "64", "--seed", "1"]));
    let f = v["result"]["frozen_fraction"].as_f64().unwrap();
    assert!((0.15..=0.35).contains(&f), "frozen fraction {f}");
}

#[test]
fn other_formats() {
    let svg = arctic(&["sample", "--n", "4", "--format", "svg"]);
    assert!(String::from_utf8_lossy(&svg.stdout).starts_with("<svg"));
    let csv = arctic(&["sample", "--n", "4", "--format", "csv"]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("line,rank,position"));
}

#[test]
fn numeric_commands() {
    let v = json(&arctic(&["tw2", "--gammas", "-2,0"]));
    let f = v["result"]["values"][1].as_f64().unwrap();
    assert!((f - 0.969372828).abs() < 1e-6);
    let v = json(&arctic(&[
        "gap",
        "--n",
        "3",
        "--a",
        "0.5",
        "--lines",
        "2,3",
        "--thresholds",
        "0,1",
    ]));
    let k = AztecKernel::new(3, 0.5).unwrap();
    let p = gap_probability(&k, &GapSpec::new(vec![2, 3], vec![0.0, 1.0]).unwrap()).unwrap();
    assert_eq!(v["result"]["probability"].as_f64().unwrap(), p);
    let v = json(&arctic(&["center", "--sites", "0,0"]));
    assert!((v["result"]["plane"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    let v = json(&arctic(&["airy-fdd", "--taus", "0,1", "--gammas", "-1,0"]));
    assert!(v["result"]["probability"].as_f64().unwrap() < 0.8);
}

#[test]
fn exit_codes() {
    assert_eq!(arctic(&["sample", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        arctic(&["center", "--sites", "0,0;0,0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        arctic(&["tw2", "--gammas", "0", "--format", "svg"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(arctic(&["bogus"]).status.code(), Some(2));
    let out = arctic(&[
        "mc-boundary",
        "--n",
        "20",
        "--samples",
        "20",
        "--tol",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bruteforce_suite_passes() {
    let v = json(&arctic(&["verify", "--suite", "bruteforce"]));
    assert_eq!(v["result"]["passed"], true);
}
