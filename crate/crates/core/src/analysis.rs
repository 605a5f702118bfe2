//! Closed-form failure estimates, the qutrit-count bound, and Monte Carlo
//! estimation of the logical failure rate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{LogicalQutrit, NineQutritCode, CODE_QUTRITS};
use crate::error::{QutritError, Result};
use crate::error_model::{sample_error, SamplingMode};

/// `1 − (1+8p)(1−p)^8`: probability that two or more of nine qutrits fail.
pub fn analytic_failure(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QutritError::InvalidProbability(p));
    }
    Ok(1.0 - (1.0 + 8.0 * p) * (1.0 - p).powi(8))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: u32,
    pub lhs: u64,
    pub rhs: u64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub n_min: u32,
    pub table: Vec<BoundRow>,
}

/// Least `n` with `3(11n + 1) ≤ 3^n`, plus the table for `n = 1..=9`.
pub fn qutrit_bound() -> BoundResult {
    let table: Vec<BoundRow> = (1..=9u32)
        .map(|n| {
            let lhs = 3 * (11 * u64::from(n) + 1);
            let rhs = 3u64.pow(n);
            BoundRow { n, lhs, rhs, satisfied: lhs <= rhs }
        })
        .collect();
    let n_min = table.iter().find(|r| r.satisfied).map(|r| r.n).expect("satisfied by n = 5");
    BoundResult { n_min, table }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub p: f64,
    pub trials: usize,
    pub mode: SamplingMode,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerformancePoint {
    pub p: f64,
    pub analytic_fail: f64,
    pub mc_fail: f64,
    pub mc_trials: usize,
    pub mc_stderr: f64,
    /// Trials stopped by an uncorrectable syndrome.
    pub uncorrectable_count: usize,
    /// Trials with two or more injected errors.
    pub multi_error_count: usize,
    /// Failures among trials with at most one injected error. Always 0 for a
    /// working decoder.
    pub low_weight_failures: usize,
}

struct TrialOutcome {
    failed: bool,
    uncorrectable: bool,
    errors: usize,
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_trial(code: &NineQutritCode, cfg: &MonteCarloConfig, index: usize) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, index);
    let q = LogicalQutrit::random(&mut rng);
    let errors = sample_error(cfg.p, CODE_QUTRITS, cfg.mode, &mut rng)?;
    if errors.is_empty() {
        return Ok(TrialOutcome { failed: false, uncorrectable: false, errors: 0 });
    }
    let report = code.run_pipeline(&q, &errors, &mut rng)?;
    Ok(TrialOutcome { failed: report.failed(), uncorrectable: report.uncorrectable.is_some(), errors: errors.len() })
}

/// Estimates the logical failure rate. Each trial draws from its own ChaCha
/// stream keyed by `(seed, trial index)`, so results do not depend on thread
/// scheduling.
pub fn monte_carlo(code: &NineQutritCode, cfg: &MonteCarloConfig) -> Result<PerformancePoint> {
    if cfg.trials == 0 {
        return Err(QutritError::NoTrials);
    }
    let analytic_fail = analytic_failure(cfg.p)?;
    let outcomes: Vec<TrialOutcome> =
        (0..cfg.trials).into_par_iter().map(|i| run_trial(code, cfg, i)).collect::<Result<_>>()?;

    let failures = outcomes.iter().filter(|o| o.failed).count();
    let mc_fail = failures as f64 / cfg.trials as f64;
    Ok(PerformancePoint {
        p: cfg.p,
        analytic_fail,
        mc_fail,
        mc_trials: cfg.trials,
        mc_stderr: (mc_fail * (1.0 - mc_fail) / cfg.trials as f64).sqrt(),
        uncorrectable_count: outcomes.iter().filter(|o| o.uncorrectable).count(),
        multi_error_count: outcomes.iter().filter(|o| o.errors >= 2).count(),
        low_weight_failures: outcomes.iter().filter(|o| o.failed && o.errors <= 1).count(),
    })
}

/// Least-squares slope of `ln y` against `ln x`. Points with `y ≤ 0` are
/// skipped; returns `None` with fewer than two usable points.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
