//! Behavioral tests of the `superlin` binary: each subcommand's happy
//! path, its failure modes, and the run-manifest contract.
// Frozen reference values keep every digit of the independent derivation.
#![allow(clippy::excessive_precision)]

mod common;

use std::fs;

use common::*;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

#[test]
fn calibrate_linear_fixture_reports_unit_ratios() {
    let dir = TempDir::new().unwrap();
    let data = fixture("linear_eta01.csv");
    let out = run_in(dir.path(), &["calibrate", "--data", data.to_str().unwrap()]);
    assert_ok(&out);

    let summary = read_json(&dir.path().join("calibrate_summary.json"));
    let eta = summary["eta"].as_f64().unwrap();
    assert!((eta - 0.1).abs() < 1e-9, "eta = {eta}");

    let report = fs::read_to_string(dir.path().join("calibrate_report.csv")).unwrap();
    let mut rows = 0;
    for line in report.lines().skip(1) {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-9, "linear response drifted: {line}");
        rows += 1;
    }
    assert_eq!(rows, 13);
}

#[test]
fn calibrate_reference_outside_curve_fails() {
    let dir = TempDir::new().unwrap();
    let data = fixture("linear_eta01.csv");
    let out = run_in(
        dir.path(),
        &["calibrate", "--data", data.to_str().unwrap(), "--reference-mu", "10000"],
    );
    assert_fails(&out);
    assert!(
        stderr_of(&out).contains("outside the tabulated range"),
        "unexpected stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn attack_matches_the_reference_operating_point() {
    // A receiver whose detectors click with p_f = 0.0054 at the trigger
    // energy and p_h = 0.00089 at half energy sits at QBER ~ 12.4% and
    // ~24.4 dB of induced loss, which both monitors catch.
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("response.csv"),
        "# label: gated tail\nmu,p\n20,0.00089\n40,0.0054\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "attack",
            "--detector0",
            "kind=curve,path=response.csv",
            "--mu",
            "40",
            "--qber-threshold",
            "0.11",
            "--loss-budget-db",
            "20",
        ],
    );
    assert_ok(&out);

    let summary = read_json(&dir.path().join("attack_summary.json"));
    let best = &summary["best"];
    assert!((best["qber"].as_f64().unwrap() - 0.12391394181522449).abs() < 1e-12);
    assert!((best["transmittance"].as_f64().unwrap() - 0.00358960395).abs() < 1e-12);
    assert!((best["loss_db"].as_f64().unwrap() - 24.449534655770939).abs() < 1e-9);
    assert_eq!(summary["verdict"], "detectable_by_both");
}

#[test]
fn attack_scan_tables_have_the_documented_shape() {
    let dir = TempDir::new().unwrap();
    let data = fixture("gate_scan.csv");
    let spec = format!("kind=grid,path={}", data.display());
    let out = run_in(
        dir.path(),
        &["attack", "--detector0", &spec, "--mu", "1,2,4", "--t", "0,2.5,5"],
    );
    assert_ok(&out);

    let scan = fs::read_to_string(dir.path().join("attack_scan.csv")).unwrap();
    let mut lines = scan.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mu,t,p_f0,p_f1,p_h0,p_h1,qber,transmittance,loss_db"
    );
    assert_eq!(lines.count(), 9, "3 energies x 3 times");

    let per_mu = fs::read_to_string(dir.path().join("attack_per_mu.csv")).unwrap();
    assert_eq!(per_mu.lines().count(), 1 + 3);

    // The pair channel grows towards the gate tail, so the optimum sits
    // at the latest trigger time.
    let summary = read_json(&dir.path().join("attack_summary.json"));
    assert_eq!(summary["best"]["t"].as_f64().unwrap(), 5.0);
}

#[test]
fn no_feasible_attack_is_a_finding_not_an_error() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "attack",
            "--detector0",
            "kind=linear,eta=0.1",
            "--mu",
            "1,5",
            "--max-loss-db",
            "0.05",
        ],
    );
    assert_ok(&out);
    let summary = read_json(&dir.path().join("attack_summary.json"));
    assert!(summary["best"].is_null());
    assert!(summary["finding"].as_str().unwrap().contains("no feasible attack"));
}

#[test]
fn malformed_curves_are_rejected_with_the_offending_line() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.csv"), "mu,p\n1,0.1\nnot-a-row\n").unwrap();
    let out = run_in(dir.path(), &["calibrate", "--data", "bad.csv"]);
    assert_fails(&out);
    assert!(
        stderr_of(&out).contains("bad.csv:3"),
        "missing line number in: {}",
        stderr_of(&out)
    );
}

#[test]
fn fock_grids_must_hold_whole_photon_numbers() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &["attack", "--detector0", "kind=worst-case,eta=0.1", "--pulse", "fock", "--mu", "1.5"],
    );
    assert_fails(&out);
    assert!(stderr_of(&out).contains("non-negative integers"));
}

#[test]
fn grid_data_without_a_trigger_time_is_refused() {
    let dir = TempDir::new().unwrap();
    let data = fixture("gate_scan.csv");
    let spec = format!("kind=grid,path={}", data.display());
    let out = run_in(dir.path(), &["attack", "--detector0", &spec, "--mu", "1,2"]);
    assert_fails(&out);
    assert!(stderr_of(&out).contains("trigger arrival time is required"));
}

#[test]
fn manifest_digests_inputs_and_records_the_seed_source() {
    let dir = TempDir::new().unwrap();
    let data = fixture("superlinear.csv");
    let out = run_in(
        dir.path(),
        &[
            "attack",
            "--detector0",
            &format!("kind=curve,path={}", data.display()),
            "--mu",
            "4",
        ],
    );
    assert_ok(&out);
    let manifest = read_json(&dir.path().join("attack_manifest.json"));
    let digest = manifest["input_digests"][data.display().to_string()].as_str().unwrap();
    let expected = hex::encode(Sha256::digest(fs::read(&data).unwrap()));
    assert_eq!(digest, expected);
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    let outputs: Vec<&str> =
        manifest["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(outputs, ["attack_scan.csv", "attack_per_mu.csv", "attack_summary.json"]);

    // Seed provenance: an explicit flag wins, the environment fills in,
    // and both are recorded.
    let sim = |dir: &TempDir, extra: &[&str], env: Option<&str>| {
        let mut cmd = std::process::Command::new(BIN);
        cmd.args([
            "simulate",
            "--detector0",
            "kind=stub,p-full=0.8,p-half=0.3",
            "--mu",
            "1",
            "--trials",
            "1000",
        ])
        .args(extra)
        .current_dir(dir.path())
        .env_remove("SUPERLIN_SEED");
        if let Some(seed) = env {
            cmd.env("SUPERLIN_SEED", seed);
        }
        let out = cmd.output().unwrap();
        assert_ok(&out);
        read_json(&dir.path().join("simulate_manifest.json"))
    };
    let via_flag = sim(&dir, &["--seed", "7"], None);
    assert_eq!(via_flag["seed"], 7);
    assert_eq!(via_flag["seed_source"], "flag");
    let via_env = sim(&dir, &[], Some("7"));
    assert_eq!(via_env["seed"], 7);
    assert_eq!(via_env["seed_source"], "env");
    let via_default = sim(&dir, &[], None);
    assert_eq!(via_default["seed"], 0);
    assert_eq!(via_default["seed_source"], "default");
}

#[test]
fn equal_seeds_reproduce_statistics_and_do_differ_across_seeds() {
    let dir_a = TempDir::new().unwrap();
    let dir_b = TempDir::new().unwrap();
    let args = |seed: &'static str| {
        [
            "simulate",
            "--detector0",
            "kind=stub,p-full=0.8,p-half=0.3",
            "--mu",
            "1",
            "--trials",
            "200000",
            "--seed",
            seed,
        ]
    };
    assert_ok(&run_in(dir_a.path(), &args("42")));
    assert_ok(&run_in(dir_b.path(), &args("42")));
    assert_same_bytes(dir_a.path(), dir_b.path(), "simulate_stats.json");

    let dir_c = TempDir::new().unwrap();
    assert_ok(&run_in(dir_c.path(), &args("43")));
    let a = fs::read(dir_a.path().join("simulate_stats.json")).unwrap();
    let c = fs::read(dir_c.path().join("simulate_stats.json")).unwrap();
    assert_ne!(a, c, "different seeds produced identical tallies");
}

#[test]
fn bound_table_covers_both_axes() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["bound", "--eta", "lin:0:1:5"]);
    assert_ok(&out);
    let table = fs::read_to_string(dir.path().join("bound_table.csv")).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "eta,crossing_qber,attack_qber,key_rate_at_attack,region"
    );
    assert_eq!(table.lines().count(), 1 + 5);
    assert!(table.contains("attackable"));

    let out = run_in(dir.path(), &["bound", "--qber", "0.05,0.3", "--json"]);
    assert_ok(&out);
    let rows = read_json(&dir.path().join("bound_table.json"));
    let eta = rows[0]["eta_bound"].as_f64().unwrap();
    assert!((eta - 0.4013393159850832).abs() < 1e-9, "eta_bound = {eta}");
    // 30% error exceeds both curves' reach: no efficiency helps.
    assert!(rows[1]["eta_bound"].is_null());
    assert!(rows[1]["eta_attack"].is_null());
}

#[test]
fn bound_requires_exactly_one_axis() {
    let dir = TempDir::new().unwrap();
    assert_fails(&run_in(dir.path(), &["bound"]));
    assert_fails(&run_in(dir.path(), &["bound", "--eta", "0.5", "--qber", "0.05"]));
}
