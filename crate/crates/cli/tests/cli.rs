use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_qutrit-ecc")).args(args).output().expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap(), out.status.code().unwrap_or(-1))
}

fn run_json(args: &[&str]) -> Value {
    let (stdout, stderr, code) = run(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn verify_passes_and_names_the_table_checks() {
    let v = run_json(&["verify"]);
    assert_eq!(v["result"]["all_passed"], true);
    let names: Vec<&str> =
        v["result"]["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"stabilizer eigenvalue table rows: 9/9 matched"));
    assert!(names.contains(&"rotation Z-term expansion 25/25 within 1e-12"));
    assert!(names.contains(&"comparison truth table rows: 9/9 matched"));
    for c in v["result"]["checks"].as_array().unwrap() {
        assert_eq!(c["passed"], true, "{c}");
    }
}

#[test]
fn demo_shift_error_is_located_and_undone() {
    let v = run_json(&["demo", "--error", "X2", "--pos", "0", "--seed", "7"]);
    let r = &v["result"]["report"];
    assert_eq!(r["syndrome"]["shift_block_eigenvalues"], serde_json::json!(["w2", "1", "1"]));
    assert_eq!(r["corrections"][0]["qutrit"], 0);
    assert_eq!(r["corrections"][0]["gate"], "X1");
    assert!((r["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn demo_without_error_has_trivial_syndrome() {
    let v = run_json(&["demo", "--error", "none"]);
    let r = &v["result"]["report"];
    assert_eq!(r["syndrome"]["shift_block_eigenvalues"], serde_json::json!(["1", "1", "1"]));
    assert!(r["corrections"].as_array().unwrap().is_empty());
    assert!((r["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn demo_rotation_error_is_corrected() {
    let v = run_json(&["demo", "--error", "Rtheta", "--theta", "0.7", "--phi", "1.1", "--pos", "5"]);
    assert!((v["result"]["report"]["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["config"]["error_spec"]["theta"], 0.7);
}

#[test]
fn logical_amplitudes_serialize_as_pairs() {
    let v = run_json(&["demo", "--seed", "2"]);
    let (re, im) = complex(&v["result"]["report"]["input"]["alpha"]);
    assert!(re.is_finite() && im.is_finite());
}

#[test]
fn montecarlo_zero_rate_has_no_failures() {
    let v = run_json(&["montecarlo", "--p", "0", "--trials", "100"]);
    let pt = &v["result"]["points"][0];
    assert_eq!(pt["mc_fail"], 0.0);
    assert_eq!(pt["mc_trials"], 100);
}

#[test]
fn montecarlo_csv_has_fixed_columns_and_exact_analytic_values() {
    let (stdout, _, code) =
        run(&["montecarlo", "--p", "0.01,0.03", "--trials", "200", "--output", "csv", "--seed", "1"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "p,trials,mc_fail,mc_stderr,analytic_fail,uncorrectable_count,multi_error_count");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let p: f64 = row[0].parse().unwrap();
        let analytic: f64 = row[4].parse().unwrap();
        assert_eq!(analytic, qutrit_ecc::analytic_failure(p).unwrap());
        assert_eq!(row[1], "200");
    }
}

#[test]
fn montecarlo_is_repeatable() {
    let args = ["montecarlo", "--p", "0.05", "--trials", "500", "--seed", "1"];
    assert_eq!(run(&args).0, run(&args).0);
    let other = ["montecarlo", "--p", "0.05", "--trials", "500", "--seed", "2"];
    assert_ne!(run(&args).0, run(&other).0);
}

#[test]
fn decompose_examples() {
    let v = run_json(&["decompose", "X12"]);
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-12);
    for c in v["result"]["coefficients"].as_array().unwrap() {
        assert!((c["modulus"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    let v = run_json(&["decompose", "X1"]);
    let nonzero: Vec<&Value> = v["result"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["modulus"].as_f64().unwrap() > 1e-12)
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!((nonzero[0]["u"].as_u64(), nonzero[0]["v"].as_u64()), (Some(1), Some(0)));
    let (re, im) = complex(&nonzero[0]["value"]);
    assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);

    let v = run_json(&["decompose", "Z12"]);
    for c in v["result"]["coefficients"].as_array().unwrap() {
        if c["u"] != 0 {
            assert!(c["modulus"].as_f64().unwrap() < 1e-12);
        }
    }
}

#[test]
fn decompose_from_entries() {
    // diag(1, i, -1)
    let v = run_json(&[
        "decompose",
        "--entries",
        "1",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "1",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "-1",
        "0",
    ]);
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-12);
    let (_, _, code) = run(&["decompose", "--entries", "1", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn table_and_circuit_commands() {
    let v = run_json(&["truth-table"]);
    assert_eq!(v["result"].as_array().unwrap().len(), 9);
    assert_eq!(v["result"][5], serde_json::json!({"q0": 1, "q1": 2, "q2": 1, "q3": 1}));

    let v = run_json(&["compare-block", "--digits", "121"]);
    assert_eq!(v["result"]["deviant"], 1);

    let v = run_json(&["phase-demo", "--error", "Z12"]);
    assert_eq!(v["result"]["corrections"], serde_json::json!(["Z1", "Z2"]));
    assert_eq!(v["result"]["restored"], true);

    let v = run_json(&["bound"]);
    assert_eq!(v["result"]["n_min"], 5);
}

#[test]
fn replay_reproduces_output() {
    let (first, _, _) = run(&["demo", "--error", "iZ2X12", "--pos", "3", "--seed", "11"]);
    let path = std::env::temp_dir().join(format!("qutrit-ecc-replay-{}.json", std::process::id()));
    std::fs::write(&path, &first).unwrap();
    let (again, _, code) = run(&["replay", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(code, 0);
    assert_eq!(first, again);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["demo", "--error", "nonsense"][..],
        &["demo", "--error", "X1", "--pos", "9"],
        &["demo", "--error", "Rtheta"],
        &["demo", "--error", "C11"],
        &["montecarlo"],
        &["montecarlo", "--p", "1.5", "--trials", "10"],
        &["compare-block", "--digits", "31"],
        &["replay", "/nonexistent/report.json"],
        &["no-such-command"],
    ] {
        let (_, stderr, code) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!stderr.is_empty());
    }
}
