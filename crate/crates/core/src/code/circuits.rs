//! Ancilla-explicit comparison circuits.
//!
//! Binary ancillas are qutrits that stay in `{|0⟩, |1⟩}`. The two-qutrit
//! comparison flips ancilla `a0` once for every input equal to 1 and ancilla
//! `a1` once for every input equal to 2, so the bits read `00` exactly when
//! the inputs agree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComparisonOutcome;
use crate::error::{QutritError, Result};
use crate::gates::{build, controlled_flip, GateName, GateOperator};
use crate::measure::{measure, BranchScript, OutcomeLabel, OutcomeSource, ProjectorFamily, OUTCOME_EPS};
use crate::register::{digits_of, QutritRegister};

fn ancilla_level_two_weight(state: &QutritRegister, ancilla: usize) -> f64 {
    let n = state.qutrits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| digits_of(*i, n)[ancilla] == 2)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Runs the comparison circuit on data qutrits `qi`, `qj` writing into the
/// two ancillas, then measures the ancillas.
pub fn compare_truth_table(
    state: &QutritRegister,
    qi: usize,
    qj: usize,
    ancillas: [usize; 2],
    source: &mut impl OutcomeSource,
) -> Result<(ComparisonOutcome, QutritRegister)> {
    state.validate_positions(&[qi, qj, ancillas[0], ancillas[1]])?;
    for &a in &ancillas {
        if ancilla_level_two_weight(state, a) > OUTCOME_EPS {
            return Err(QutritError::AncillaOutOfSubspace(a));
        }
    }
    let flip_on_one = controlled_flip(1)?;
    let flip_on_two = controlled_flip(2)?;
    let mut current = state.clone();
    for data in [qi, qj] {
        current.apply(&flip_on_one, &[data, ancillas[0]])?;
        current.apply(&flip_on_two, &[data, ancillas[1]])?;
    }
    let (label, post) = measure(&current, &ProjectorFamily::computational(2)?, &ancillas, source)?;
    let OutcomeLabel::Digits(bits) = label else { unreachable!("computational family") };
    Ok((ComparisonOutcome::Bits(bits[0], bits[1]), post))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthRow {
    pub q0: u8,
    pub q1: u8,
    pub q2: u8,
    pub q3: u8,
}

/// Evaluates the comparison circuit on all nine basis inputs.
pub fn truth_table() -> Result<Vec<TruthRow>> {
    let mut rows = Vec::with_capacity(9);
    for q0 in 0..3u8 {
        for q1 in 0..3u8 {
            let state = QutritRegister::from_digits(&[q0, q1, 0, 0])?;
            let (outcome, _) = compare_truth_table(&state, 0, 1, [2, 3], &mut BranchScript::default())?;
            let ComparisonOutcome::Bits(q2, q3) = outcome else { unreachable!() };
            rows.push(TruthRow { q0, q1, q2, q3 });
        }
    }
    Ok(rows)
}

/// Outcome of comparing one three-qutrit block against its first qutrit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockComparison {
    /// Ancilla bits for the pairs `(0, 1)` and `(0, 2)`.
    pub bits: [(u8, u8); 2],
    /// Index of the qutrit that disagrees with the other two.
    pub deviant: Option<usize>,
    /// False when all three qutrits disagree pairwise.
    pub consistent: bool,
}

/// Compares a three-qutrit block using four explicit ancillas
/// (a 7-qutrit register: block at 0..3, ancillas at 3..7).
pub fn compare_block_with_ancillas(block: &QutritRegister, source: &mut impl OutcomeSource) -> Result<BlockComparison> {
    if block.qutrits() != 3 {
        return Err(QutritError::DimensionMismatch(block.qutrits(), 3));
    }
    let ancillas = QutritRegister::basis(4, "0000")?;
    let state = block.tensor(&ancillas)?;
    let (first, state) = compare_truth_table(&state, 0, 1, [3, 4], source)?;
    let (second, _) = compare_truth_table(&state, 0, 2, [5, 6], source)?;
    let (ComparisonOutcome::Bits(a, b), ComparisonOutcome::Bits(c, d)) = (first, second) else { unreachable!() };
    let bits = [(a, b), (c, d)];
    let differs = |pair: (u8, u8)| pair != (0, 0);
    let (deviant, consistent) = match (differs(bits[0]), differs(bits[1])) {
        (false, false) => (None, true),
        (true, true) if bits[0] == bits[1] => (Some(0), true),
        (true, true) => (None, false),
        (true, false) => (Some(1), true),
        (false, true) => (Some(2), true),
    };
    Ok(BlockComparison { bits, deviant, consistent })
}

/// Result of detecting relative phase flips with the two-level Hadamards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HadamardPhaseCheck {
    /// Probability that `H01` maps the probe `H01|0⟩` to `|1⟩` after the error.
    pub flip_01: f64,
    /// Probability that `H20` maps the probe `H20|0⟩` to `|2⟩` after the error.
    pub flip_02: f64,
    /// `Z1` / `Z2` corrections implied by definite flips.
    pub corrections: Vec<String>,
    /// Whether applying those corrections restores every probe exactly.
    pub restored: bool,
}

fn flip_probability(
    error: &GateOperator,
    hadamard: &GateOperator,
    target: u8,
    corrections: &[GateOperator],
) -> Result<f64> {
    let mut probe = QutritRegister::basis(1, "0")?.applied(hadamard, &[0])?;
    probe.apply(error, &[0])?;
    for c in corrections {
        probe.apply(c, &[0])?;
    }
    probe.apply(hadamard, &[0])?;
    Ok(probe.amplitudes()[target as usize].norm_sqr())
}

/// Detects a `Z1`-type flip between `|0⟩,|1⟩` with `H01` and a `Z2`-type
/// flip between `|0⟩,|2⟩` with `H20`, then checks that undoing them in
/// sequence cancels the error (so `Z12 = Z1·Z2` is handled in two steps).
pub fn hadamard_phase_check(error: &GateOperator) -> Result<HadamardPhaseCheck> {
    if error.arity() != 1 {
        return Err(QutritError::ArityMismatch { arity: error.arity(), given: 1 });
    }
    let h01 = build(GateName::H01)?;
    let h20 = build(GateName::H20)?;
    let flip_01 = flip_probability(error, &h01, 1, &[])?;
    let flip_02 = flip_probability(error, &h20, 2, &[])?;

    let mut fixes = Vec::new();
    if flip_01 > 0.5 {
        fixes.push(build(GateName::Z1)?);
    }
    if flip_02 > 0.5 {
        fixes.push(build(GateName::Z2)?);
    }
    let residual_flip = flip_probability(error, &h01, 1, &fixes)? + flip_probability(error, &h20, 2, &fixes)?;
    let restored = {
        let combined = fixes.iter().fold(error.clone(), |acc, f| f.compose(&acc).expect("single-qutrit"));
        let m = combined.matrix();
        let phase = m[(0, 0)];
        phase.norm() > 0.5
            && m.max_abs_diff(&crate::matrix::CMatrix::identity(3).scale(phase / Complex64::from(phase.norm()))) < 1e-12
    };
    Ok(HadamardPhaseCheck {
        flip_01,
        flip_02,
        corrections: fixes.iter().map(|f| f.label().to_string()).collect(),
        restored: restored && residual_flip < 1e-12,
    })
}
