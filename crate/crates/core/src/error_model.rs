//! Single-qutrit error operators.
//!
//! Covers the general linear-combination error `E = aI + Σ b_i Z_i + Σ (c_mn X_mn + Σ d_mnj Y_mnj)`,
//! phase-only superposition errors and their reduction to `R_θφ`, the
//! expansion of any 3×3 operator over `X^u R^v`, and random error sampling.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QutritError, Result};
use crate::gates::{self, fixed, generalized_pauli, y_operator, GateName, GateOperator, Swap};
use crate::matrix::CMatrix;
use crate::OPERATOR_TOL;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coefficients of the general error operator.
///
/// `d` is ordered `(01,1), (01,2), (12,1), (12,2), (20,1), (20,2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub a: Complex64,
    pub b: [Complex64; 2],
    pub c: [Complex64; 3],
    pub d: [Complex64; 6],
}

impl ErrorModel {
    fn coefficients(&self) -> impl Iterator<Item = &Complex64> {
        std::iter::once(&self.a).chain(&self.b).chain(&self.c).chain(&self.d)
    }

    /// Builds `E` as a 3×3 operator. The result may be non-unitary; check
    /// [`GateOperator::is_unitary`] before injecting it.
    pub fn assemble(&self) -> Result<GateOperator> {
        if self.coefficients().all(|c| *c == ZERO) {
            return Err(QutritError::ZeroModel);
        }
        let mut terms = vec![(self.a, CMatrix::identity(3))];
        terms.push((self.b[0], fixed(GateName::Z1).matrix().clone()));
        terms.push((self.b[1], fixed(GateName::Z2).matrix().clone()));
        for (k, swap) in Swap::ALL.into_iter().enumerate() {
            terms.push((self.c[k], fixed(swap.gate_name()).matrix().clone()));
            for j in 0..2 {
                terms.push((self.d[2 * k + j], y_operator(swap, j as u8 + 1)?.matrix().clone()));
            }
        }
        let e = terms.iter().fold(CMatrix::zeros(3), |acc, (coef, m)| &acc + &m.scale(*coef));
        GateOperator::general("E", e)
    }
}

/// Phase angles picked up by `|0⟩, |1⟩, |2⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionErrorSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `diag(e^{ia}, e^{ib}, e^{ic})`.
pub fn superposition_error(spec: SuperpositionErrorSpec) -> Result<GateOperator> {
    for angle in [spec.a, spec.b, spec.c] {
        if !angle.is_finite() {
            return Err(QutritError::NonFiniteAngle(angle));
        }
    }
    let m = CMatrix::diagonal(&[
        Complex64::from_polar(1.0, spec.a),
        Complex64::from_polar(1.0, spec.b),
        Complex64::from_polar(1.0, spec.c),
    ]);
    GateOperator::new("S", m)
}

/// `op = e^{i·global} · R_θφ`, all angles in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationAngles {
    pub theta: f64,
    pub phi: f64,
    pub global: f64,
}

pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(x: f64, y: f64) -> f64 {
    let d = normalize_angle(x - y);
    d.min(TAU - d)
}

/// Factors a diagonal unitary into a global phase times `R_θφ`.
pub fn reduce_to_rotation(op: &GateOperator) -> Result<RotationAngles> {
    let m = op.matrix();
    if m.dim() != 3 || !m.is_diagonal(OPERATOR_TOL) || !op.is_unitary() {
        return Err(QutritError::NotDiagonal);
    }
    let (d0, d1, d2) = (m[(0, 0)], m[(1, 1)], m[(2, 2)]);
    Ok(RotationAngles {
        theta: normalize_angle((d1 * d0.conj()).arg()),
        phi: normalize_angle((d2 * d0.conj()).arg()),
        global: normalize_angle(d0.arg()),
    })
}

/// Coefficients `c[u][v]` of `M = Σ c_uv X^u R^v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliDecomposition {
    pub coefficients: [[Complex64; 3]; 3],
}

impl PauliDecomposition {
    pub fn coefficient(&self, u: usize, v: usize) -> Complex64 {
        self.coefficients[u][v]
    }

    pub fn reconstruct(&self) -> CMatrix {
        let mut out = CMatrix::zeros(3);
        for u in 0..3 {
            for v in 0..3 {
                out = &out + &generalized_pauli(u, v).scale(self.coefficients[u][v]);
            }
        }
        out
    }

    pub fn nonzero_terms(&self, tol: f64) -> Vec<(usize, usize, Complex64)> {
        (0..3)
            .flat_map(|u| (0..3).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, self.coefficients[u][v]))
            .filter(|(_, _, c)| c.norm() > tol)
            .collect()
    }
}

/// Expands a 3×3 matrix via the trace inner product `c_uv = Tr((X^u R^v)† M) / 3`.
pub fn pauli_decompose(matrix: &CMatrix) -> Result<PauliDecomposition> {
    if matrix.dim() != 3 {
        return Err(QutritError::ArityMismatch { arity: 1, given: gates_arity(matrix.dim()) });
    }
    let mut coefficients = [[ZERO; 3]; 3];
    for (u, row) in coefficients.iter_mut().enumerate() {
        for (v, slot) in row.iter_mut().enumerate() {
            *slot = generalized_pauli(u, v).adjoint().matmul(matrix).trace() / 3.0;
        }
    }
    Ok(PauliDecomposition { coefficients })
}

fn gates_arity(dim: usize) -> usize {
    (dim as f64).log(3.0).round() as usize
}

/// Which menu the discrete sampler draws from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMenu {
    /// Eleven operators: the five bit errors, three phase errors and one
    /// `Y` per swap.
    #[default]
    Standard,
    /// Standard plus every remaining `Y_mnj` and the ω-phase errors.
    Extended,
}

impl ErrorMenu {
    pub fn operators(self) -> Vec<GateOperator> {
        let mut ops: Vec<GateOperator> = [
            GateName::X01,
            GateName::X12,
            GateName::X20,
            GateName::X1,
            GateName::X2,
            GateName::Z1,
            GateName::Z2,
            GateName::Z12,
        ]
        .into_iter()
        .map(fixed)
        .collect();
        let standard_y = [(Swap::S01, 1), (Swap::S12, 2), (Swap::S20, 1)];
        ops.extend(standard_y.iter().map(|&(s, j)| y_operator(s, j).expect("phase index 1 or 2")));
        if self == ErrorMenu::Extended {
            let rest_y = [(Swap::S01, 2), (Swap::S12, 1), (Swap::S20, 2)];
            ops.extend(rest_y.iter().map(|&(s, j)| y_operator(s, j).expect("phase index 1 or 2")));
            ops.push(fixed(GateName::R1));
            ops.push(fixed(GateName::R2));
        }
        ops
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    Discrete(ErrorMenu),
    /// `R_θφ` with both angles uniform on `[0, 2π)`.
    Continuous,
}

impl Default for SamplingMode {
    fn default() -> Self {
        SamplingMode::Discrete(ErrorMenu::Standard)
    }
}

/// An operator applied to one qutrit of a register.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectedError {
    pub position: usize,
    pub operator: GateOperator,
}

impl InjectedError {
    pub fn new(position: usize, operator: GateOperator) -> Self {
        Self { position, operator }
    }

    pub fn named(position: usize, name: GateName) -> Result<Self> {
        Ok(Self { position, operator: gates::build(name)? })
    }
}

/// Afflicts each of `n` positions independently with probability `p`.
pub fn sample_error<R: Rng + ?Sized>(p: f64, n: usize, mode: SamplingMode, rng: &mut R) -> Result<Vec<InjectedError>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QutritError::InvalidProbability(p));
    }
    let menu = match mode {
        SamplingMode::Discrete(menu) => menu.operators(),
        SamplingMode::Continuous => Vec::new(),
    };
    let mut errors = Vec::new();
    for position in 0..n {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let operator = match mode {
            SamplingMode::Discrete(_) => menu[rng.gen_range(0..menu.len())].clone(),
            SamplingMode::Continuous => {
                let theta = rng.gen_range(0.0..TAU);
                let phi = rng.gen_range(0.0..TAU);
                gates::build(GateName::Rtheta { theta, phi })?
            }
        };
        errors.push(InjectedError { position, operator });
    }
    Ok(errors)
}
