use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qutrit_ecc::{Complex64, GateName, InjectedError, LogicalQutrit, NineQutritCode, OmegaPower, TrialReport};

#[test]
fn eigenvalues_serialize_as_short_labels() {
    let labels = serde_json::to_value(OmegaPower::ALL).unwrap();
    assert_eq!(labels, json!(["1", "w", "w2"]));
    let back: Vec<OmegaPower> = serde_json::from_value(labels).unwrap();
    assert_eq!(back, OmegaPower::ALL);
}

#[test]
fn complex_values_serialize_as_pairs() {
    let q = LogicalQutrit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8), Complex64::new(0.0, 0.0)).unwrap();
    let v = serde_json::to_value(q).unwrap();
    assert_eq!(v, json!({"alpha": [0.6, 0.0], "beta": [0.0, -0.8], "gamma": [0.0, 0.0]}));
}

#[test]
fn trial_reports_round_trip() {
    let code = NineQutritCode::shared();
    let q = LogicalQutrit::random(&mut ChaCha8Rng::seed_from_u64(1));
    let errors = [InjectedError::named(6, GateName::Z12).unwrap()];
    let report = code.run_pipeline(&q, &errors, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: TrialReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
