use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qutrit_ecc::error_model::{sample_error, ErrorMenu};
use qutrit_ecc::{measure, Complex64, ProjectorFamily, QutritRegister, SamplingMode};

// Critical value of chi-square with 2 degrees of freedom at p = 0.001.
const CHI2_DF2_999: f64 = 13.816;

#[test]
fn born_rule_frequencies_pass_chi_square() {
    let weights = [0.5, 0.3, 0.2];
    let amps: Vec<Complex64> = weights.iter().map(|w: &f64| Complex64::from_polar(w.sqrt(), 1.3)).collect();
    let state = QutritRegister::from_amplitudes(1, amps).unwrap();
    let family = ProjectorFamily::computational(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let samples = 10_000;
    let mut counts = [0usize; 3];
    for _ in 0..samples {
        let (label, _) = measure(&state, &family, &[0], &mut rng).unwrap();
        let qutrit_ecc::OutcomeLabel::Digits(d) = label else { panic!("digit label expected") };
        counts[d[0] as usize] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .zip(weights)
        .map(|(&o, w)| {
            let e = w * samples as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    assert!(chi2 < CHI2_DF2_999, "counts {counts:?}, chi2 {chi2}");
}

#[test]
fn zero_probability_outcomes_are_never_sampled() {
    let state = QutritRegister::basis(2, "12").unwrap();
    let family = ProjectorFamily::computational(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let (label, _) = measure(&state, &family, &[1], &mut rng).unwrap();
        assert_eq!(label, qutrit_ecc::OutcomeLabel::Digits(vec![2]));
    }
}

#[test]
fn error_count_is_binomial() {
    let (p, n, trials) = (0.01, 9, 100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let total: usize = (0..trials).map(|_| sample_error(p, n, SamplingMode::default(), &mut rng).unwrap().len()).sum();
    let mean = total as f64 / trials as f64;
    let sigma = (n as f64 * p * (1.0 - p) / trials as f64).sqrt();
    assert!((mean - n as f64 * p).abs() < 3.0 * sigma, "mean {mean}, expected {} ± {}", n as f64 * p, 3.0 * sigma);
}

#[test]
fn discrete_menu_is_sampled_uniformly() {
    let menu = ErrorMenu::Standard.operators();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut counts = vec![0usize; menu.len()];
    let draws = 22_000;
    let mut seen = 0;
    while seen < draws {
        for e in sample_error(1.0, 1, SamplingMode::Discrete(ErrorMenu::Standard), &mut rng).unwrap() {
            let k = menu.iter().position(|m| m.label() == e.operator.label()).unwrap();
            counts[k] += 1;
            seen += 1;
        }
    }
    let expected = draws as f64 / menu.len() as f64;
    let chi2: f64 = counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    // Chi-square with 10 degrees of freedom at p = 0.001.
    assert!(chi2 < 29.588, "{counts:?} chi2 {chi2}");
}

#[test]
fn p_one_hits_every_position_and_p_zero_none() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let all = sample_error(1.0, 9, SamplingMode::Continuous, &mut rng).unwrap();
    assert_eq!(all.iter().map(|e| e.position).collect::<Vec<_>>(), (0..9).collect::<Vec<_>>());
    assert!(sample_error(0.0, 9, SamplingMode::Continuous, &mut rng).unwrap().is_empty());
    assert!(sample_error(1.2, 9, SamplingMode::Continuous, &mut rng).is_err());
}
