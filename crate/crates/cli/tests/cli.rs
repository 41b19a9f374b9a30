//! End-to-end checks of the command-line interface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_epwlab"))
}

#[test]
fn schubert_expressions() {
    let out = bin()
        .args([
            "schubert",
            "integrate(sigma1^2*(sigma2^2-sigma1*sigma3)*(16*sigma1^3-12*sigma1*sigma2+12*sigma3))",
            "--g",
            "3",
            "6",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "72");

    let out = bin()
        .args(["schubert", "integrate(sigma1^9)"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "42");

    let out = bin()
        .args(["schubert", "sigma1^2"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("sigma(1,1)") && text.contains("sigma(2)"), "{text}");
}

#[test]
fn usage_errors() {
    // non-prime field
    let out = bin().args(["kummer", "--p", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // unknown command
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // no command
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kummer_fixture_has_sixteen_nodes() {
    let out = bin()
        .args(["kummer", "--p", "11", "--fixture", "split"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["node_count"], 16);
    assert_eq!(v["delpezzo"]["bitangents_found"], 28);
    assert_eq!(v["delpezzo"]["residual_bitangents"], 16);
}

#[test]
fn reports_are_thread_count_invariant() {
    let run = |threads: &str| -> String {
        let out = bin()
            .args(["epw", "--p", "7", "--seed", "3"])
            .env("EPWLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8_lossy(&out.stdout).to_string()
    };
    let a = run("1");
    let b = run("8");
    assert_eq!(a, b, "byte-identical reports across thread caps");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["rank_counts"][2], 0, "r3 = 0");
    assert_eq!(v["interp_nullity"], 1);
}

#[test]
fn invariants_and_lattice_check() {
    let out = bin().args(["invariants"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(v["fujiki_q4"], 48);
    assert_eq!(v["rr_q4"], 10);
    assert_eq!(v["u2_square_h1_plus_h2"], 4);

    let out = bin().args(["lattice", "check"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| !c.is_null()));
}
