//! Dense state-vector simulation of ternary quantum registers and a
//! nine-qutrit repetition code that corrects an arbitrary error on any
//! single qutrit.
//!
//! The crate is layered bottom-up:
//!
//! * [`matrix`] and [`register`]: complex matrices, qutrit registers and
//!   strided gate application.
//! * [`measure`]: projective measurement with Born-rule sampling, plus
//!   deterministic branch enumeration.
//! * [`gates`]: every named single- and two-qutrit operator.
//! * [`error_model`]: general error operators, phase-only superposition
//!   errors and the generalized Pauli decomposition.
//! * [`code`]: encoder, stabilizer syndromes, error location and the full
//!   correction pipeline.
//! * [`analysis`]: closed-form failure probability, the qutrit-count bound
//!   and Monte Carlo estimation.
//!
//! Qutrit 0 is always the most significant base-3 digit of a basis index.

pub mod analysis;
pub mod code;
pub mod error;
pub mod error_model;
pub mod gates;
pub mod matrix;
pub mod measure;
pub mod register;

pub use num_complex::Complex64;

pub use analysis::{analytic_failure, monte_carlo, qutrit_bound, BoundResult, MonteCarloConfig, PerformancePoint};
pub use code::{LogicalQutrit, NineQutritCode, StabilizerId, Syndrome, TrialReport};
pub use error::{QutritError, Result};
pub use error_model::{ErrorModel, InjectedError, PauliDecomposition, SamplingMode, SuperpositionErrorSpec};
pub use gates::{build, GateName, GateOperator};
pub use matrix::CMatrix;
pub use measure::{measure, BranchScript, OmegaPower, OutcomeLabel, OutcomeSource, ProjectorFamily};
pub use register::{fidelity, QutritRegister};

/// Absolute tolerance for exact-arithmetic comparisons in tests.
pub const EXACT_TOL: f64 = 1e-12;
/// Construction-time unitarity / projector tolerance.
pub const OPERATOR_TOL: f64 = 1e-10;
/// Runtime norm tolerance.
pub const NORM_TOL: f64 = 1e-9;

/// The primitive cube root of unity `e^{2πi/3}`.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// `ω^k` for any integer `k`, computed exactly from the reduced exponent.
pub fn omega_pow(k: i64) -> Complex64 {
    match k.rem_euclid(3) {
        0 => Complex64::new(1.0, 0.0),
        1 => omega(),
        _ => omega().conj(),
    }
}
