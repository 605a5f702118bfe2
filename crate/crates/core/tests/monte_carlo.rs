use qutrit_ecc::error_model::ErrorMenu;
use qutrit_ecc::{analytic_failure, monte_carlo, MonteCarloConfig, NineQutritCode, SamplingMode};

fn run(p: f64, trials: usize, mode: SamplingMode, seed: u64) -> qutrit_ecc::PerformancePoint {
    monte_carlo(NineQutritCode::shared(), &MonteCarloConfig { p, trials, mode, seed }).unwrap()
}

#[test]
fn identical_seeds_give_identical_points() {
    for mode in [SamplingMode::default(), SamplingMode::Continuous] {
        let a = run(0.05, 300, mode, 9);
        let b = run(0.05, 300, mode, 9);
        assert_eq!(a, b);
    }
}

#[test]
fn low_weight_trials_never_fail() {
    for mode in [SamplingMode::Discrete(ErrorMenu::Extended), SamplingMode::Continuous] {
        let point = run(0.08, 500, mode, 21);
        assert_eq!(point.low_weight_failures, 0, "{mode:?}");
        assert!(point.multi_error_count > 0);
    }
}

#[test]
fn stderr_and_analytic_columns_are_consistent() {
    let point = run(0.1, 400, SamplingMode::default(), 4);
    let expect = (point.mc_fail * (1.0 - point.mc_fail) / point.mc_trials as f64).sqrt();
    assert_eq!(point.mc_stderr, expect);
    assert_eq!(point.analytic_fail, analytic_failure(0.1).unwrap());
    assert!(point.mc_fail <= point.multi_error_count as f64 / point.mc_trials as f64);
}

#[test]
fn zero_trials_is_an_error() {
    let cfg = MonteCarloConfig { p: 0.1, trials: 0, mode: SamplingMode::default(), seed: 0 };
    assert!(monte_carlo(NineQutritCode::shared(), &cfg).is_err());
}
