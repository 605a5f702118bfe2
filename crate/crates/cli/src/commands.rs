//! Command implementations. Each returns the exact text written to stdout.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qutrit_ecc::analysis::log_log_slope;
use qutrit_ecc::code::{
    compare_block_with_ancillas, hadamard_phase_check, truth_table, BlockComparison, HadamardPhaseCheck,
    StabilizerTableRow, TruthRow,
};
use qutrit_ecc::error_model::{pauli_decompose, ErrorMenu};
use qutrit_ecc::gates::{verify_identities, IdentityCheck};
use qutrit_ecc::{
    build, monte_carlo, qutrit_bound, BoundResult, CMatrix, GateName, GateOperator, InjectedError, LogicalQutrit,
    MonteCarloConfig, NineQutritCode, PerformancePoint, QutritRegister, TrialReport,
};

use crate::config::{sampling_mode, CommandKind, ErrorSpec, MatrixSource, OutputFormat, RunConfig};

/// Text for stdout plus whether every check passed.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

/// Invalid input; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult<T> = Result<T, UsageError>;

fn usage<T>(msg: impl Into<String>) -> CmdResult<T> {
    Err(UsageError(msg.into()))
}

#[derive(Serialize)]
struct Report<'a, T> {
    config: &'a RunConfig,
    result: T,
}

fn json<T: Serialize>(config: &RunConfig, result: T) -> CmdResult<String> {
    let mut text = serde_json::to_string_pretty(&Report { config, result })?;
    text.push('\n');
    Ok(text)
}

pub fn run(config: &RunConfig) -> CmdResult<Output> {
    let ok = |text| Output { text, ok: true };
    match config.command {
        CommandKind::Verify => verify(config),
        CommandKind::Demo => demo(config).map(ok),
        CommandKind::Montecarlo => montecarlo(config).map(ok),
        CommandKind::Decompose => decompose(config).map(ok),
        CommandKind::TruthTable => json(config, truth_table()?).map(ok),
        CommandKind::CompareBlock => compare_block(config).map(ok),
        CommandKind::PhaseDemo => phase_demo(config).map(ok),
        CommandKind::Bound => json(config, qutrit_bound()).map(ok),
    }
}

/// Resolves a gate or error name: fixed gates, `Rtheta` with angles, and the
/// `iZjXmn` labels of the error menu.
pub fn resolve_operator(name: &str, theta: Option<f64>, phi: Option<f64>) -> CmdResult<GateOperator> {
    if name.eq_ignore_ascii_case("rtheta") {
        let (Some(theta), Some(phi)) = (theta, phi) else {
            return usage("Rtheta needs --theta and --phi");
        };
        return Ok(build(GateName::Rtheta { theta, phi })?);
    }
    if let Ok(g) = GateName::from_str(name) {
        return Ok(build(g)?);
    }
    ErrorMenu::Extended
        .operators()
        .into_iter()
        .find(|op| op.label().eq_ignore_ascii_case(name))
        .ok_or_else(|| UsageError(format!("unknown gate or error name: {name}")))
}

#[derive(Serialize)]
struct SwapExpansion {
    gate: String,
    coefficients: Vec<Coefficient>,
    residual: f64,
    max_modulus_error: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    all_passed: bool,
    checks: Vec<IdentityCheck>,
    stabilizer_table: Vec<StabilizerTableRow>,
    truth_table: Vec<TruthRow>,
    swap_expansions: Vec<SwapExpansion>,
    bound: BoundResult,
}

const LISTED_TRUTH_TABLE: [[u8; 4]; 9] = [
    [0, 0, 0, 0],
    [0, 1, 1, 0],
    [0, 2, 0, 1],
    [1, 0, 1, 0],
    [1, 1, 0, 0],
    [1, 2, 1, 1],
    [2, 0, 0, 1],
    [2, 1, 1, 1],
    [2, 2, 0, 0],
];

fn verify(config: &RunConfig) -> CmdResult<Output> {
    let mut checks = verify_identities();

    let table = NineQutritCode::shared().stabilizer_table()?;
    let states: Vec<&str> = table.iter().map(|r| r.state.as_str()).collect();
    let mut distinct = states.clone();
    distinct.dedup();
    let matched_states =
        distinct.iter().filter(|s| table.iter().filter(|r| &r.state == *s).all(StabilizerTableRow::matches)).count();
    let worst_table = table.iter().map(|r| (1.0 - r.probability).abs()).fold(0.0, f64::max);
    checks.push(IdentityCheck {
        name: format!("stabilizer eigenvalue table rows: {matched_states}/{} matched", distinct.len()),
        passed: matched_states == distinct.len(),
        max_deviation: worst_table,
    });

    let rows = truth_table()?;
    let matched_rows =
        rows.iter().zip(LISTED_TRUTH_TABLE).filter(|(r, want)| [r.q0, r.q1, r.q2, r.q3] == *want).count();
    checks.push(IdentityCheck {
        name: format!("comparison truth table rows: {matched_rows}/9 matched"),
        passed: matched_rows == 9 && rows.len() == 9,
        max_deviation: 0.0,
    });

    let mut swap_expansions = Vec::new();
    for name in [GateName::X01, GateName::X12, GateName::X20] {
        let m = build(name)?.matrix().clone();
        let d = pauli_decompose(&m)?;
        let residual = d.reconstruct().max_abs_diff(&m);
        let coefficients = coefficient_rows(&d);
        let max_modulus_error = coefficients.iter().map(|c| (c.modulus - 1.0 / 3.0).abs()).fold(0.0, f64::max);
        checks.push(IdentityCheck {
            name: format!("{name} expands over nine terms of modulus 1/3"),
            passed: residual < 1e-12 && max_modulus_error < 1e-12,
            max_deviation: residual.max(max_modulus_error),
        });
        swap_expansions.push(SwapExpansion { gate: name.to_string(), coefficients, residual, max_modulus_error });
    }

    let bound = qutrit_bound();
    checks.push(IdentityCheck {
        name: format!("qutrit-count bound minimum n = {}", bound.n_min),
        passed: bound.n_min == 5,
        max_deviation: 0.0,
    });

    let all_passed = checks.iter().all(|c| c.passed);
    let report =
        VerifyReport { all_passed, checks, stabilizer_table: table, truth_table: rows, swap_expansions, bound };
    Ok(Output { text: json(config, report)?, ok: all_passed })
}

#[derive(Serialize)]
struct DemoResult {
    report: TrialReport,
}

fn injected_errors(spec: &Option<ErrorSpec>) -> CmdResult<Vec<InjectedError>> {
    let Some(spec) = spec else { return Ok(Vec::new()) };
    if spec.name.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    if spec.position >= 9 {
        return usage(format!("position {} outside 0..=8", spec.position));
    }
    let op = resolve_operator(&spec.name, spec.theta, spec.phi)?;
    if op.arity() != 1 {
        return usage(format!("{} acts on two qutrits; errors are single-qutrit", spec.name));
    }
    Ok(vec![InjectedError::new(spec.position, op)])
}

fn demo(config: &RunConfig) -> CmdResult<String> {
    let errors = injected_errors(&config.error_spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let q = LogicalQutrit::random(&mut rng);
    let report = NineQutritCode::shared().run_pipeline(&q, &errors, &mut rng)?;
    json(config, DemoResult { report })
}

#[derive(Serialize)]
struct MonteCarloResult {
    points: Vec<PerformancePoint>,
    log_log_slope: Option<f64>,
}

pub const CSV_HEADER: &str = "p,trials,mc_fail,mc_stderr,analytic_fail,uncorrectable_count,multi_error_count";

fn montecarlo(config: &RunConfig) -> CmdResult<String> {
    if config.p.is_empty() {
        return usage("montecarlo needs at least one --p value");
    }
    let trials = config.trials.unwrap_or(10_000);
    let mode = sampling_mode(config.mode, config.menu);
    let code = NineQutritCode::shared();
    let points = config
        .p
        .iter()
        .map(|&p| monte_carlo(code, &MonteCarloConfig { p, trials, mode, seed: config.seed }))
        .collect::<Result<Vec<_>, _>>()?;
    match config.output_format {
        OutputFormat::Json => {
            let slope = log_log_slope(&points.iter().map(|pt| (pt.p, pt.mc_fail)).collect::<Vec<_>>());
            json(config, MonteCarloResult { points, log_log_slope: slope })
        }
        OutputFormat::Csv => {
            let mut text = format!("{CSV_HEADER}\n");
            for pt in &points {
                writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    pt.p,
                    pt.mc_trials,
                    pt.mc_fail,
                    pt.mc_stderr,
                    pt.analytic_fail,
                    pt.uncorrectable_count,
                    pt.multi_error_count
                )
                .expect("writing to a String");
            }
            Ok(text)
        }
    }
}

#[derive(Serialize)]
struct Coefficient {
    u: usize,
    v: usize,
    value: Complex64,
    modulus: f64,
}

fn coefficient_rows(d: &qutrit_ecc::PauliDecomposition) -> Vec<Coefficient> {
    (0..3)
        .flat_map(|u| (0..3).map(move |v| (u, v)))
        .map(|(u, v)| {
            let value = d.coefficient(u, v);
            Coefficient { u, v, value, modulus: value.norm() }
        })
        .collect()
}

#[derive(Serialize)]
struct DecomposeResult {
    coefficients: Vec<Coefficient>,
    residual: f64,
}

fn decompose(config: &RunConfig) -> CmdResult<String> {
    let matrix = match &config.matrix {
        Some(MatrixSource::Gate(name)) => {
            let (theta, phi) = config.error_spec.as_ref().map_or((None, None), |s| (s.theta, s.phi));
            let op = resolve_operator(name, theta, phi)?;
            if op.arity() != 1 {
                return usage(format!("{name} is not a single-qutrit operator"));
            }
            op.matrix().clone()
        }
        Some(MatrixSource::Entries(entries)) => {
            if entries.len() != 9 {
                return usage(format!("expected 9 complex entries, got {}", entries.len()));
            }
            CMatrix::from_vec(3, entries.clone())?
        }
        None => return usage("decompose needs a gate name or --entries"),
    };
    let d = pauli_decompose(&matrix)?;
    let residual = d.reconstruct().max_abs_diff(&matrix);
    json(config, DecomposeResult { coefficients: coefficient_rows(&d), residual })
}

fn compare_block(config: &RunConfig) -> CmdResult<String> {
    let digits = config.digits.as_deref().unwrap_or("000");
    if digits.len() != 3 {
        return usage(format!("expected three digits, got {digits:?}"));
    }
    let block = QutritRegister::basis(3, digits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let result: BlockComparison = compare_block_with_ancillas(&block, &mut rng)?;
    json(config, result)
}

fn phase_demo(config: &RunConfig) -> CmdResult<String> {
    let spec = config.error_spec.as_ref().map_or(("Z12", None, None), |s| (s.name.as_str(), s.theta, s.phi));
    let op = resolve_operator(spec.0, spec.1, spec.2)?;
    let result: HadamardPhaseCheck = hadamard_phase_check(&op)?;
    json(config, result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_fixed_rotation_and_menu_names() {
        assert_eq!(resolve_operator("x12", None, None).unwrap().label(), "X12");
        assert_eq!(resolve_operator("iZ1X20", None, None).unwrap().label(), "iZ1X20");
        assert!(resolve_operator("Rtheta", Some(0.1), Some(0.2)).unwrap().is_unitary());
        assert!(resolve_operator("Rtheta", Some(0.1), None).is_err());
        assert!(resolve_operator("Y", None, None).is_err());
    }

    #[test]
    fn none_error_injects_nothing() {
        let spec = Some(ErrorSpec { name: "none".into(), position: 99, theta: None, phi: None });
        assert!(injected_errors(&spec).unwrap().is_empty());
        let bad = Some(ErrorSpec { name: "X1".into(), position: 9, theta: None, phi: None });
        assert!(injected_errors(&bad).is_err());
    }

    #[test]
    fn csv_output_has_one_row_per_rate() {
        let config = RunConfig {
            p: vec![0.0, 0.5],
            trials: Some(20),
            output_format: OutputFormat::Csv,
            ..RunConfig::new(CommandKind::Montecarlo, 1)
        };
        let text = run(&config).unwrap().text;
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,20,0,0,0,"));
    }
}
