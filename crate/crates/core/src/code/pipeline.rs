use serde::{Deserialize, Serialize};

use super::{
    Correction, Decoded, LogicalQutrit, NineQutritCode, PhaseRecord, ShiftRecord, StabilizerId, Syndrome, BLOCKS,
};
use crate::error::{QutritError, Result};
use crate::error_model::InjectedError;
use crate::measure::{enumerate_branches, Branch, OmegaPower, OutcomeSource};

/// Logical fidelity below which a trial counts as a failure.
pub const FAILURE_FIDELITY: f64 = 1.0 - 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectedRecord {
    pub position: usize,
    pub label: String,
}

/// One encode → inject → correct → decode run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub input: LogicalQutrit,
    pub injected: Vec<InjectedRecord>,
    pub syndrome: Syndrome,
    pub shift_records: Vec<ShiftRecord>,
    pub phase_record: Option<PhaseRecord>,
    pub corrections: Vec<Correction>,
    pub output: Decoded,
    /// `|⟨ψ_in|ψ_out⟩|` on the logical amplitudes.
    pub fidelity: f64,
    pub uncorrectable: Option<String>,
}

impl TrialReport {
    pub fn failed(&self) -> bool {
        self.uncorrectable.is_some() || self.fidelity < FAILURE_FIDELITY
    }
}

impl NineQutritCode {
    /// Runs the full correction procedure on `q` after injecting `errors`.
    ///
    /// Uncorrectable syndromes end the correction early and are recorded in
    /// the report; only invalid inputs (bad positions, non-unitary errors)
    /// produce `Err`.
    pub fn run_pipeline(
        &self,
        q: &LogicalQutrit,
        errors: &[InjectedError],
        source: &mut impl OutcomeSource,
    ) -> Result<TrialReport> {
        let mut state = self.encode(q)?;
        let mut injected = Vec::with_capacity(errors.len());
        for e in errors {
            state.apply(&e.operator, &[e.position])?;
            injected.push(InjectedRecord { position: e.position, label: e.operator.label().to_string() });
        }

        let mut syndrome = Syndrome::default();
        for block in 0..BLOCKS {
            let (w, post) = self.measure_stabilizer(&state, StabilizerId::Shift(block), source)?;
            syndrome.shift_block_eigenvalues[block] = w;
            state = post;
        }

        let mut shift_records = Vec::new();
        let mut corrections = Vec::new();
        let mut phase_record = None;
        let mut uncorrectable = None;

        let shift_stage = (0..BLOCKS).try_for_each(|block| {
            let w: OmegaPower = syndrome.shift_block_eigenvalues[block];
            let (post, record) = self.locate_and_correct_shift(&state, block, w, source)?;
            state = post;
            syndrome.located_positions.extend(record.location);
            corrections.extend(record.correction.clone());
            shift_records.push(record);
            Ok::<_, QutritError>(())
        });

        let outcome = shift_stage.and_then(|()| {
            let (post, record) = self.correct_phase(&state, source)?;
            state = post;
            syndrome.phase_block_eigenvalues = Some(record.eigenvalues);
            corrections.extend(record.correction.clone());
            phase_record = Some(record);
            Ok(())
        });
        match outcome {
            Ok(()) => {}
            Err(QutritError::Uncorrectable(why)) => uncorrectable = Some(why),
            Err(other) => return Err(other),
        }

        let output = self.decode(&state)?;
        let fidelity = output.overlap(q).min(1.0);
        Ok(TrialReport {
            input: *q,
            injected,
            syndrome,
            shift_records,
            phase_record,
            corrections,
            output,
            fidelity,
            uncorrectable,
        })
    }

    /// Runs the pipeline once per measurement branch with nonzero probability.
    pub fn run_pipeline_branches(
        &self,
        q: &LogicalQutrit,
        errors: &[InjectedError],
    ) -> Result<Vec<Branch<TrialReport>>> {
        enumerate_branches(|script| self.run_pipeline(q, errors, script))
    }
}
