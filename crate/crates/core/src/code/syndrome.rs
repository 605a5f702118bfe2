use serde::{Deserialize, Serialize};

use super::{block_positions, NineQutritCode, StabilizerId, BLOCKS, CODE_QUTRITS};
use crate::error::{QutritError, Result};
use crate::gates::{fixed, GateName};
use crate::measure::{measure, OmegaPower, OutcomeSource};
use crate::register::QutritRegister;

/// Result of comparing two qutrits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonOutcome {
    /// Ancilla bits `(q2, q3)` of the truth-table circuit.
    Bits(u8, u8),
    /// `(digit_i − digit_j) mod 3`.
    Difference(u8),
}

/// A qutrit found to carry a shift `X^shift` relative to its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftLocation {
    pub block: usize,
    pub index: usize,
    pub qutrit: usize,
    /// 1 for a clockwise (`X1`) deviation, 2 for anticlockwise (`X2`).
    pub shift: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub qutrit: usize,
    pub gate: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftRecord {
    pub block: usize,
    /// Differences of pairs `(b0, b1)` and `(b0, b2)`.
    pub differences: [u8; 2],
    pub location: Option<ShiftLocation>,
    pub correction: Option<Correction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    /// Eigenvalues of `S_12`, `S_13`, `S_23`.
    pub eigenvalues: [OmegaPower; 3],
    pub block: Option<usize>,
    pub correction: Option<Correction>,
}

/// Everything measured during one correction run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Syndrome {
    pub shift_block_eigenvalues: [OmegaPower; 3],
    pub located_positions: Vec<ShiftLocation>,
    /// `None` when the run stopped before the phase stage.
    pub phase_block_eigenvalues: Option<[OmegaPower; 3]>,
}

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.shift_block_eigenvalues.iter().all(|w| w.is_trivial())
            && self.located_positions.is_empty()
            && self.phase_block_eigenvalues.map_or(true, |e| e.iter().all(|w| w.is_trivial()))
    }
}

fn check_code_register(state: &QutritRegister) -> Result<()> {
    if state.qutrits() != CODE_QUTRITS {
        return Err(QutritError::DimensionMismatch(state.qutrits(), CODE_QUTRITS));
    }
    Ok(())
}

fn shift_gate(shift: u8) -> GateName {
    match shift % 3 {
        1 => GateName::X1,
        2 => GateName::X2,
        _ => unreachable!("zero shift has no gate"),
    }
}

/// `(deviant index, shift)` explaining the two in-block differences, if any
/// single-qutrit deviation does.
fn explain_differences(d01: u8, d02: u8) -> std::result::Result<Option<(usize, u8)>, String> {
    let neg = |x: u8| (3 - x) % 3;
    match (d01, d02) {
        (0, 0) => Ok(None),
        (a, b) if a == b => Ok(Some((0, a))),
        (a, 0) => Ok(Some((1, neg(a)))),
        (0, b) => Ok(Some((2, neg(b)))),
        (a, b) => Err(format!("all three qutrits differ (differences {a}, {b})")),
    }
}

impl NineQutritCode {
    /// Measures one stabilizer; returns its eigenvalue and the collapsed state.
    pub fn measure_stabilizer(
        &self,
        state: &QutritRegister,
        id: StabilizerId,
        source: &mut impl OutcomeSource,
    ) -> Result<(OmegaPower, QutritRegister)> {
        check_code_register(state)?;
        let family = self.family(id)?;
        let (label, post) = measure(state, family, &id.positions(), source)?;
        Ok((label.eigenvalue().expect("stabilizer families carry eigenvalue labels"), post))
    }

    /// Measures `(digit_i − digit_j) mod 3` through the eigenvalues of `R_i R_j²`.
    pub fn compare_difference(
        &self,
        state: &QutritRegister,
        qi: usize,
        qj: usize,
        source: &mut impl OutcomeSource,
    ) -> Result<(ComparisonOutcome, QutritRegister)> {
        let (label, post) = measure(state, self.difference_family(), &[qi, qj], source)?;
        let diff = label.eigenvalue().expect("eigenvalue labels").exponent();
        Ok((ComparisonOutcome::Difference(diff), post))
    }

    /// Locates and undoes a shift inside `block`.
    ///
    /// `eigenvalue` is the block's `R⊗R⊗R` outcome. The comparisons must be
    /// explained by at most one deviant qutrit whose shift matches that
    /// eigenvalue, otherwise the block is reported uncorrectable.
    pub fn locate_and_correct_shift(
        &self,
        state: &QutritRegister,
        block: usize,
        eigenvalue: OmegaPower,
        source: &mut impl OutcomeSource,
    ) -> Result<(QutritRegister, ShiftRecord)> {
        check_code_register(state)?;
        if block >= BLOCKS {
            return Err(QutritError::PositionOutOfRange { position: 3 * block, n: CODE_QUTRITS });
        }
        let [b0, b1, b2] = block_positions(block);
        let mut differences = [0u8; 2];
        let mut current = state.clone();
        for (slot, other) in differences.iter_mut().zip([b1, b2]) {
            let (outcome, post) = self.compare_difference(&current, b0, other, source)?;
            let ComparisonOutcome::Difference(d) = outcome else { unreachable!() };
            *slot = d;
            current = post;
        }

        let explained = explain_differences(differences[0], differences[1])
            .map_err(|why| QutritError::Uncorrectable(format!("block {block}: {why}")))?;
        let shift = explained.map_or(0, |(_, s)| s);
        if shift != eigenvalue.exponent() {
            return Err(QutritError::Uncorrectable(format!(
                "block {block}: comparisons imply shift {shift} but stabilizer eigenvalue is {eigenvalue}"
            )));
        }

        let mut record = ShiftRecord { block, differences, location: None, correction: None };
        if let Some((index, shift)) = explained {
            let qutrit = 3 * block + index;
            let undo = fixed(shift_gate(3 - shift));
            current.apply(&undo, &[qutrit])?;
            record.location = Some(ShiftLocation { block, index, qutrit, shift });
            record.correction = Some(Correction { qutrit, gate: undo.label().to_string() });
        }
        Ok((current, record))
    }

    /// Measures `S_12, S_13, S_23` and removes an ω-phase from the single deviant block.
    pub fn correct_phase(
        &self,
        state: &QutritRegister,
        source: &mut impl OutcomeSource,
    ) -> Result<(QutritRegister, PhaseRecord)> {
        check_code_register(state)?;
        let mut current = state.clone();
        let mut eigenvalues = [OmegaPower::One; 3];
        for (slot, id) in eigenvalues.iter_mut().zip(StabilizerId::RELATIVE) {
            let (w, post) = self.measure_stabilizer(&current, id, source)?;
            *slot = w;
            current = post;
        }

        // S_ij has eigenvalue ω^(v_j − v_i) when block b carries R^(v_b).
        let [e01, e02, e12] = eigenvalues.map(|w| w.exponent());
        let neg = |x: u8| (3 - x) % 3;
        let deviant = match (e01 != 0, e02 != 0, e12 != 0) {
            (false, false, false) => None,
            (true, true, false) if e01 == e02 => Some((0, neg(e01))),
            (true, false, true) if e12 == neg(e01) => Some((1, e01)),
            (false, true, true) if e12 == e02 => Some((2, e02)),
            _ => {
                return Err(QutritError::Uncorrectable(format!(
                    "relative phase eigenvalues {}, {}, {} match no single block",
                    eigenvalues[0], eigenvalues[1], eigenvalues[2]
                )))
            }
        };

        let mut record = PhaseRecord { eigenvalues, block: None, correction: None };
        if let Some((block, power)) = deviant {
            let qutrit = block_positions(block)[0];
            // undo R^power with R^(3 - power)
            let undo = match 3 - power {
                1 => fixed(GateName::GenR),
                _ => fixed(GateName::R2),
            };
            current.apply(&undo, &[qutrit])?;
            record.block = Some(block);
            record.correction = Some(Correction { qutrit, gate: undo.label().to_string() });
        }
        Ok((current, record))
    }
}
