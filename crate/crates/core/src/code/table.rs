//! Block-0 stabilizer eigenvalues for the listed error states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{NineQutritCode, StabilizerId};
use crate::error::Result;
use crate::measure::OmegaPower;
use crate::omega_pow;
use crate::register::{parse_digits, QutritRegister};

/// One row: a block-0 superposition (other blocks in `|000⟩+|111⟩+|222⟩`)
/// and the outcome of one stabilizer on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerTableRow {
    pub state: String,
    pub stabilizer: String,
    pub expected: OmegaPower,
    pub measured: OmegaPower,
    /// Probability of the most likely outcome; 1 for an eigenstate.
    pub probability: f64,
}

impl StabilizerTableRow {
    pub fn matches(&self) -> bool {
        self.measured == self.expected && (self.probability - 1.0).abs() < 1e-12
    }
}

/// `(terms, phase exponents, stabilizer, listed eigenvalue)`.
type Spec = ([&'static str; 3], [i64; 3], StabilizerId, OmegaPower);

const ROWS: [Spec; 10] = {
    use OmegaPower::*;
    let shift = StabilizerId::Shift(0);
    let phase = StabilizerId::Phase(0);
    [
        (["000", "111", "222"], [0, 0, 0], shift, One),
        (["000", "111", "222"], [0, 0, 0], phase, One),
        (["200", "011", "122"], [0, 0, 0], shift, OmegaSquared),
        (["020", "101", "212"], [0, 0, 0], shift, OmegaSquared),
        (["002", "110", "221"], [0, 0, 0], shift, OmegaSquared),
        (["100", "211", "022"], [0, 0, 0], shift, Omega),
        (["010", "121", "202"], [0, 0, 0], shift, Omega),
        (["001", "112", "220"], [0, 0, 0], shift, Omega),
        (["000", "111", "222"], [0, 1, 2], phase, OmegaSquared),
        (["000", "111", "222"], [0, 2, 1], phase, Omega),
    ]
};

fn block_state(terms: [&str; 3], phases: [i64; 3]) -> Result<QutritRegister> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 27];
    for (t, k) in terms.iter().zip(phases) {
        let d = parse_digits(t)?;
        amps[9 * d[0] as usize + 3 * d[1] as usize + d[2] as usize] += omega_pow(k);
    }
    QutritRegister::normalized(3, amps)
}

fn describe(terms: [&str; 3], phases: [i64; 3]) -> String {
    let coeff = |k: i64| match k {
        0 => "",
        1 => "ω",
        _ => "ω²",
    };
    terms.iter().zip(phases).map(|(t, k)| format!("{}|{t}⟩", coeff(k))).collect::<Vec<_>>().join(" + ")
}

impl NineQutritCode {
    /// Measures `RRRIIIIII` or `XXXIIIIII` on each listed error state.
    pub fn stabilizer_table(&self) -> Result<Vec<StabilizerTableRow>> {
        let clean = block_state(["000", "111", "222"], [0, 0, 0])?;
        let rest = clean.tensor(&clean)?;
        ROWS.iter()
            .map(|&(terms, phases, id, expected)| {
                let state = block_state(terms, phases)?.tensor(&rest)?;
                let probs = self.family(id)?.probabilities(&state, &id.positions())?;
                let (best, &probability) =
                    probs.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("three outcomes");
                let measured = self.family(id)?.labels()[best].eigenvalue().expect("eigenvalue labels");
                Ok(StabilizerTableRow {
                    state: describe(terms, phases),
                    stabilizer: id.to_string(),
                    expected,
                    measured,
                    probability,
                })
            })
            .collect()
    }
}
