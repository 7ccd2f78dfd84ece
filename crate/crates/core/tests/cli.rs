//! End-to-end tests of the `k0silting` binary: exit-code contract, report
//! determinism, and the documented example values.

use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k0silting"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn usage_error_is_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    // Missing required input.
    assert_eq!(run(&["hom"]).status.code(), Some(2));
}

#[test]
fn parse_error_is_exit_2() {
    let dir = std::env::temp_dir().join("k0silting-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, b"{ not json").unwrap();
    let out = run(&[
        "hom",
        "--algebra",
        bad.to_str().unwrap(),
        "--complex",
        &fixture("x_example.complex.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hom_examples() {
    // P1 stalk against itself: dimension 1.
    let dir = std::env::temp_dir().join("k0silting-cli-hom");
    std::fs::create_dir_all(&dir).unwrap();
    let p1 = dir.join("p1.complex.json");
    std::fs::write(&p1, br#"{"terms": {"0": ["1"]}, "differentials": {}}"#).unwrap();
    let out = run(&[
        "hom",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--complex",
        p1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["details"]["dimension"], 1);

    // S1 against Σ S1: dimension 0.
    let out = run(&[
        "hom",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--complex",
        &fixture("s1.complex.json"),
        "--complex",
        &fixture("s1.complex.json"),
        "--shift",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["details"]["dimension"], 0);

    // Disjoint shifted support: dimension 0.
    let out = run(&[
        "hom",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--complex",
        &fixture("x_example.complex.json"),
        "--shift",
        "9",
    ]);
    assert_eq!(stdout_json(&out)["details"]["dimension"], 0);
}

#[test]
fn gamma_examples() {
    // Bundled two-term X over the stalk silting: P2 +1, P1 -1.
    let out = run(&[
        "gamma",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--complex",
        &fixture("x_example.complex.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["details"]["gamma"]["P2"], 1);
    assert_eq!(v["details"]["gamma"]["P1"], -1);
    assert_eq!(v["details"]["length"], 2);

    // A stalk summand: +1 on its own label.
    let dir = std::env::temp_dir().join("k0silting-cli-gamma");
    std::fs::create_dir_all(&dir).unwrap();
    let p3 = dir.join("p3.complex.json");
    std::fs::write(&p3, br#"{"terms": {"0": ["3"]}, "differentials": {}}"#).unwrap();
    let out = run(&[
        "gamma",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--complex",
        p3.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["details"]["gamma"]["P3"], 1);
    assert_eq!(v["details"]["length"], 1);

    // Σ(P3): class -1 on its label (the sign law through --class).
    let sp3 = dir.join("sp3.complex.json");
    std::fs::write(&sp3, br#"{"terms": {"-1": ["3"]}, "differentials": {}}"#).unwrap();
    let out = run(&[
        "gamma",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--complex",
        sp3.to_str().unwrap(),
        "--class",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["details"]["class"]["P3"], -1);
    assert_eq!(v["details"]["normalizing_shift"], 1);

    // An object outside F: verdict fail, exit 1.
    let out = run(&[
        "gamma",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--complex",
        sp3.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "fail");
}

#[test]
fn jobs_flag_is_accepted() {
    let out = run(&[
        "verify",
        "presilting",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--jobs",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_under_fixed_seed() {
    let args = [
        "verify",
        "jordan-holder",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--samples",
        "10",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_exit_codes() {
    // presilting on the 2-rigid collection fails (exit 1) with the witness
    // at shift 2.
    let out = run(&[
        "verify",
        "presilting",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("rigid2.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "fail");
    let violations = v["details"]["violations"].as_array().unwrap();
    assert!(violations.iter().any(|w| w[2] == 2));

    // presilting on the stalks passes.
    let out = run(&[
        "verify",
        "presilting",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // theorem-a needs a silting collection; rigid2 is a precondition error.
    let out = run(&[
        "verify",
        "theorem-a",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("rigid2.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // cluster-n on the stalks passes for d = 2 and 3.
    for d in ["2", "3"] {
        let out = run(&[
            "verify",
            "cluster-n",
            "--algebra",
            &fixture("a3.algebra.json"),
            "--silting",
            &fixture("stalk_silting.json"),
            "--d",
            d,
            "--samples",
            "3",
        ]);
        assert_eq!(out.status.code(), Some(0), "d = {d}");
        let v = stdout_json(&out);
        assert_eq!(v["details"]["nonzero_generators"], 0);
        assert_eq!(v["details"]["quotient"]["rank"], 3);
    }

    // fd-closure fails on rigid2 (F_2 not closed under extensions).
    let out = run(&[
        "verify",
        "fd-closure",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("rigid2.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["details"]["closed"], false);

    // fd-closure passes on the presilting stalks.
    let out = run(&[
        "verify",
        "fd-closure",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--d",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn theorem_a_passes_on_bundle() {
    let out = run(&[
        "verify",
        "theorem-a",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["details"]["k0sp_rank"], 3);
    assert_eq!(v["details"]["sampled"]["rank"], 3);
    assert_eq!(v["details"]["sampled"]["torsion"], serde_json::json!([]));
    assert_eq!(v["details"]["additivity_failures"], 0);
}

#[test]
fn fp_field_sessions_work() {
    let out = run(&[
        "gamma",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--silting",
        &fixture("stalk_silting.json"),
        "--complex",
        &fixture("x_example.complex.json"),
        "--field",
        "Fp:7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["details"]["gamma"]["P2"], 1);
    assert_eq!(v["details"]["gamma"]["P1"], -1);

    // Composite modulus is a usage error.
    let out = run(&[
        "hom",
        "--algebra",
        &fixture("a3.algebra.json"),
        "--complex",
        &fixture("x_example.complex.json"),
        "--field",
        "Fp:8",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
