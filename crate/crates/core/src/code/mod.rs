//! The nine-qutrit repetition code.
//!
//! Logical `|k⟩` is three copies of the block `(|000⟩ + ω^k|111⟩ + ω^{2k}|222⟩)/√3`.
//! Shift errors are caught per block by `R⊗R⊗R`, located by pairwise
//! difference measurements and undone with the inverse shift. Phase errors
//! show up as a block whose ω-pattern differs from the others; they are found
//! with the relative operators `S_ij = (X⊗X⊗X)_i (X⊗X⊗X)_j^{-1}`, which are
//! trivial on the whole codespace, and undone with a power of `R`.

mod circuits;
mod pipeline;
mod syndrome;
mod table;

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QutritError, Result};
use crate::gates::{fixed, GateName, GateOperator};
use crate::measure::{eigenprojectors_order3, ProjectorFamily};
use crate::register::{digits_of, QutritRegister};
use crate::{omega_pow, NORM_TOL};

pub use circuits::{
    compare_block_with_ancillas, compare_truth_table, hadamard_phase_check, truth_table, BlockComparison,
    HadamardPhaseCheck, TruthRow,
};
pub use pipeline::{InjectedRecord, TrialReport, FAILURE_FIDELITY};
pub use syndrome::{ComparisonOutcome, Correction, PhaseRecord, ShiftLocation, ShiftRecord, Syndrome};
pub use table::StabilizerTableRow;

pub const CODE_QUTRITS: usize = 9;
pub const BLOCKS: usize = 3;

/// Qutrit positions of block `b`.
pub fn block_positions(block: usize) -> [usize; 3] {
    [3 * block, 3 * block + 1, 3 * block + 2]
}

/// `α|0⟩_L + β|1⟩_L + γ|2⟩_L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalQutrit {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl LogicalQutrit {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Self> {
        let q = Self { alpha, beta, gamma };
        let norm_sqr = q.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(QutritError::NotNormalized(norm_sqr));
        }
        Ok(q)
    }

    pub fn basis(k: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 3];
        amps[k % 3] = Complex64::new(1.0, 0.0);
        Self::from_array(amps)
    }

    /// Random normalized amplitudes (components uniform on the unit square, then normalized).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let amps: [Complex64; 3] =
                std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-3 {
                return Self::from_array(amps.map(|a| a / norm));
            }
        }
    }

    fn from_array([alpha, beta, gamma]: [Complex64; 3]) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn amplitudes(&self) -> [Complex64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amplitudes().iter().zip(other.amplitudes()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm()
    }
}

/// Measurable order-3 operators on the nine data qutrits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilizerId {
    /// `R⊗R⊗R` on one block (e.g. `RRRIIIIII` for block 0).
    Shift(usize),
    /// `X⊗X⊗X` on one block (e.g. `XXXIIIIII` for block 0).
    Phase(usize),
    /// `(X⊗X⊗X)` on block `i` times its inverse on block `j`.
    Relative(usize, usize),
}

impl StabilizerId {
    pub const GENERATORS: [StabilizerId; 6] = [
        StabilizerId::Shift(0),
        StabilizerId::Shift(1),
        StabilizerId::Shift(2),
        StabilizerId::Phase(0),
        StabilizerId::Phase(1),
        StabilizerId::Phase(2),
    ];
    pub const RELATIVE: [StabilizerId; 3] =
        [StabilizerId::Relative(0, 1), StabilizerId::Relative(0, 2), StabilizerId::Relative(1, 2)];

    pub fn positions(&self) -> Vec<usize> {
        match *self {
            StabilizerId::Shift(b) | StabilizerId::Phase(b) => block_positions(b).to_vec(),
            StabilizerId::Relative(i, j) => block_positions(i).into_iter().chain(block_positions(j)).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StabilizerId::Shift(b) | StabilizerId::Phase(b) => b < BLOCKS,
            StabilizerId::Relative(i, j) => i < BLOCKS && j < BLOCKS && i != j,
        };
        if ok {
            Ok(())
        } else {
            Err(QutritError::PositionOutOfRange { position: 3 * BLOCKS, n: CODE_QUTRITS })
        }
    }

    /// Local operator acting on [`positions`](Self::positions).
    pub fn operator(&self) -> GateOperator {
        let r = fixed(GateName::GenR);
        let x = fixed(GateName::GenX);
        let x_inv = fixed(GateName::X2);
        match self {
            StabilizerId::Shift(_) => r.tensor(&r).tensor(&r),
            StabilizerId::Phase(_) => x.tensor(&x).tensor(&x),
            StabilizerId::Relative(..) => x.tensor(&x).tensor(&x).tensor(&x_inv).tensor(&x_inv).tensor(&x_inv),
        }
        .relabel(self.to_string())
    }
}

impl fmt::Display for StabilizerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StabilizerId::Shift(b) | StabilizerId::Phase(b) => {
                let sym = if matches!(self, StabilizerId::Shift(_)) { "RRR" } else { "XXX" };
                let word: String = (0..BLOCKS).map(|k| if k == b { sym } else { "III" }).collect();
                f.write_str(&word)
            }
            StabilizerId::Relative(i, j) => write!(f, "S_{}{}", i + 1, j + 1),
        }
    }
}

/// Encoder, syndrome extraction and correction for the nine-qutrit code.
///
/// Holds the logical basis states and prebuilt projector families; build it
/// once (or use [`NineQutritCode::shared`]) and reuse it across trials.
pub struct NineQutritCode {
    logical: [QutritRegister; 3],
    shift_family: ProjectorFamily,
    phase_family: ProjectorFamily,
    relative_family: ProjectorFamily,
    difference_family: ProjectorFamily,
}

impl fmt::Debug for NineQutritCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NineQutritCode").finish_non_exhaustive()
    }
}

fn logical_basis_state(k: i64) -> QutritRegister {
    let norm = (27.0f64).sqrt().recip();
    let amplitudes = (0..3usize.pow(CODE_QUTRITS as u32))
        .map(|index| {
            let digits = digits_of(index, CODE_QUTRITS);
            let repetition = digits.chunks(3).all(|b| b[0] == b[1] && b[1] == b[2]);
            if !repetition {
                return Complex64::new(0.0, 0.0);
            }
            let phase: i64 = digits.chunks(3).map(|b| b[0] as i64).sum();
            omega_pow(k * phase) * norm
        })
        .collect();
    QutritRegister::from_amplitudes(CODE_QUTRITS, amplitudes).expect("logical states are normalized")
}

impl NineQutritCode {
    pub fn new() -> Self {
        let family = |id: StabilizerId| eigenprojectors_order3(&id.operator()).expect("stabilizers have order three");
        let r = fixed(GateName::GenR);
        let difference = r.tensor(&r.power(2)).relabel("R⊗R²");
        Self {
            logical: [logical_basis_state(0), logical_basis_state(1), logical_basis_state(2)],
            shift_family: family(StabilizerId::Shift(0)),
            phase_family: family(StabilizerId::Phase(0)),
            relative_family: family(StabilizerId::Relative(0, 1)),
            difference_family: eigenprojectors_order3(&difference).expect("R⊗R² has order three"),
        }
    }

    /// Process-wide instance; construction builds a few 729×729 projectors.
    pub fn shared() -> &'static Self {
        static CODE: OnceLock<NineQutritCode> = OnceLock::new();
        CODE.get_or_init(Self::new)
    }

    /// Logical basis state `|k⟩_L`.
    pub fn logical_state(&self, k: usize) -> &QutritRegister {
        &self.logical[k % 3]
    }

    pub fn family(&self, id: StabilizerId) -> Result<&ProjectorFamily> {
        id.validate()?;
        Ok(match id {
            StabilizerId::Shift(_) => &self.shift_family,
            StabilizerId::Phase(_) => &self.phase_family,
            StabilizerId::Relative(..) => &self.relative_family,
        })
    }

    pub(crate) fn difference_family(&self) -> &ProjectorFamily {
        &self.difference_family
    }

    pub fn encode(&self, q: &LogicalQutrit) -> Result<QutritRegister> {
        LogicalQutrit::new(q.alpha, q.beta, q.gamma)?;
        let amplitudes = (0..self.logical[0].dim())
            .map(|i| q.amplitudes().iter().zip(&self.logical).map(|(c, l)| c * l.amplitudes()[i]).sum())
            .collect();
        QutritRegister::normalized(CODE_QUTRITS, amplitudes)
    }

    /// Projects onto the codespace.
    pub fn decode(&self, state: &QutritRegister) -> Result<Decoded> {
        if state.qutrits() != CODE_QUTRITS {
            return Err(QutritError::DimensionMismatch(state.qutrits(), CODE_QUTRITS));
        }
        let mut coefficients = [Complex64::new(0.0, 0.0); 3];
        for (c, l) in coefficients.iter_mut().zip(&self.logical) {
            *c = l.inner(state)?;
        }
        let residual = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let inside: Complex64 =
                    coefficients.iter().zip(&self.logical).map(|(c, l)| c * l.amplitudes()[i]).sum();
                (a - inside).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        Ok(Decoded { coefficients, residual })
    }
}

impl Default for NineQutritCode {
    fn default() -> Self {
        Self::new()
    }
}

/// Codespace projection of a nine-qutrit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    /// `⟨k_L|ψ⟩` for `k = 0, 1, 2`.
    pub coefficients: [Complex64; 3],
    /// Norm of the component orthogonal to the codespace.
    pub residual: f64,
}

impl Decoded {
    /// Normalized logical state; fails when most of the weight lies outside the codespace.
    pub fn logical(&self) -> Result<LogicalQutrit> {
        if self.residual > 0.5 {
            return Err(QutritError::OutsideCodespace(self.residual));
        }
        let norm = self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let [a, b, g] = self.coefficients.map(|c| c / norm);
        LogicalQutrit::new(a, b, g)
    }

    /// `|⟨input|decoded⟩|` without renormalizing.
    pub fn overlap(&self, input: &LogicalQutrit) -> f64 {
        input.amplitudes().iter().zip(self.coefficients).map(|(a, c)| a.conj() * c).sum::<Complex64>().norm()
    }
}
