//! Named qutrit operators and the algebraic identities relating them.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QutritError, Result};
use crate::matrix::{CMatrix, SparseRows};
use crate::{omega, omega_pow, EXACT_TOL, OPERATOR_TOL};

/// A square operator on `arity` qutrits with a display label.
///
/// Built-in gates are always unitary. [`GateOperator::general`] admits
/// non-unitary matrices (for error-model analysis) and records the fact;
/// such operators cannot be applied to a register.
#[derive(Clone)]
pub struct GateOperator {
    arity: usize,
    label: String,
    matrix: CMatrix,
    unitary: bool,
    rows: Arc<SparseRows>,
}

fn arity_of(dim: usize) -> Result<usize> {
    let mut arity = 0;
    let mut d = dim;
    while d > 1 && d % 3 == 0 {
        d /= 3;
        arity += 1;
    }
    if d != 1 || arity == 0 {
        return Err(QutritError::BadDimension(dim));
    }
    Ok(arity)
}

impl GateOperator {
    /// Wraps a unitary matrix; fails if `M†M` deviates from `I` by more than 1e-10.
    pub fn new(label: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        let gate = Self::general(label, matrix)?;
        if !gate.unitary {
            return Err(QutritError::NotUnitary { label: gate.label, deviation: gate.matrix.unitarity_deviation() });
        }
        Ok(gate)
    }

    /// Wraps any matrix of dimension `3^k`, flagging whether it is unitary.
    pub fn general(label: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        let arity = arity_of(matrix.dim())?;
        let unitary = matrix.is_unitary(OPERATOR_TOL);
        let rows = Arc::new(matrix.sparse_rows());
        Ok(Self { arity, label: label.into(), matrix, unitary, rows })
    }

    pub fn identity(arity: usize) -> Self {
        Self::new("I", CMatrix::identity(3usize.pow(arity as u32))).expect("identity is unitary")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.matrix.unitarity_deviation()
    }

    pub(crate) fn sparse_rows(&self) -> &[Vec<(usize, Complex64)>] {
        &self.rows
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Operator product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.arity != rhs.arity {
            return Err(QutritError::ArityMismatch { arity: self.arity, given: rhs.arity });
        }
        Self::general(format!("{}·{}", self.label, rhs.label), self.matrix.matmul(&rhs.matrix))
    }

    pub fn power(&self, exponent: u32) -> Self {
        Self::general(format!("{}^{}", self.label, exponent), self.matrix.pow(exponent)).expect("same dimension")
    }

    pub fn adjoint(&self) -> Self {
        Self::general(format!("{}†", self.label), self.matrix.adjoint()).expect("same dimension")
    }

    /// `self ⊗ rhs`; `self` acts on the earlier positions.
    pub fn tensor(&self, rhs: &Self) -> Self {
        Self::general(format!("{}{}", self.label, rhs.label), self.matrix.kron(&rhs.matrix)).expect("dimension 3^k")
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::general(self.label.clone(), self.matrix.scale(factor)).expect("same dimension")
    }
}

impl fmt::Debug for GateOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GateOperator")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .field("unitary", &self.unitary)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl PartialEq for GateOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateName {
    X01,
    X12,
    X20,
    X1,
    X2,
    Z1,
    Z2,
    Z12,
    R1,
    R2,
    /// Generalized shift `X|j⟩ = |j+1⟩`.
    GenX,
    /// Generalized clock `R|j⟩ = ω^j|j⟩`.
    GenR,
    H01,
    H12,
    H20,
    MSplus1,
    MSplus2,
    C11,
    C21,
    Rtheta {
        theta: f64,
        phi: f64,
    },
}

impl GateName {
    /// Every parameter-free name.
    pub const FIXED: [GateName; 19] = [
        GateName::X01,
        GateName::X12,
        GateName::X20,
        GateName::X1,
        GateName::X2,
        GateName::Z1,
        GateName::Z2,
        GateName::Z12,
        GateName::R1,
        GateName::R2,
        GateName::GenX,
        GateName::GenR,
        GateName::H01,
        GateName::H12,
        GateName::H20,
        GateName::MSplus1,
        GateName::MSplus2,
        GateName::C11,
        GateName::C21,
    ];

    pub fn symbol(&self) -> String {
        match self {
            GateName::X01 => "X01".into(),
            GateName::X12 => "X12".into(),
            GateName::X20 => "X20".into(),
            GateName::X1 => "X1".into(),
            GateName::X2 => "X2".into(),
            GateName::Z1 => "Z1".into(),
            GateName::Z2 => "Z2".into(),
            GateName::Z12 => "Z12".into(),
            GateName::R1 => "R1".into(),
            GateName::R2 => "R2".into(),
            GateName::GenX => "X".into(),
            GateName::GenR => "R".into(),
            GateName::H01 => "H01".into(),
            GateName::H12 => "H12".into(),
            GateName::H20 => "H20".into(),
            GateName::MSplus1 => "MS+1".into(),
            GateName::MSplus2 => "MS+2".into(),
            GateName::C11 => "C11".into(),
            GateName::C21 => "C21".into(),
            GateName::Rtheta { theta, phi } => format!("R({theta},{phi})"),
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

impl FromStr for GateName {
    type Err = QutritError;

    /// Parses parameter-free names; `Rtheta` needs angles and is built directly.
    fn from_str(s: &str) -> Result<Self> {
        GateName::FIXED
            .iter()
            .copied()
            .find(|g| g.symbol().eq_ignore_ascii_case(s))
            .or(match s {
                "GenX" => Some(GateName::GenX),
                "GenR" => Some(GateName::GenR),
                "MSplus1" => Some(GateName::MSplus1),
                "MSplus2" => Some(GateName::MSplus2),
                _ => None,
            })
            .ok_or_else(|| QutritError::UnknownGate(s.to_string()))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn shift_matrix(k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(3);
    for j in 0..3 {
        m[((j + k) % 3, j)] = c(1.0, 0.0);
    }
    m
}

fn clock_matrix(k: i64) -> CMatrix {
    CMatrix::diagonal(&[c(1.0, 0.0), omega_pow(k), omega_pow(2 * k)])
}

/// Two-qutrit operator `|c,t⟩ → |c, t + [c == control_value]⟩` (mod 3).
fn controlled_increment(control_value: usize) -> CMatrix {
    let mut m = CMatrix::zeros(9);
    for ctl in 0..3 {
        for t in 0..3 {
            let t_out = if ctl == control_value { (t + 1) % 3 } else { t };
            m[(ctl * 3 + t_out, ctl * 3 + t)] = c(1.0, 0.0);
        }
    }
    m
}

pub fn rotation_matrix(theta: f64, phi: f64) -> CMatrix {
    CMatrix::diagonal(&[c(1.0, 0.0), Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, phi)])
}

/// Constructs the operator for `name`.
pub fn build(name: GateName) -> Result<GateOperator> {
    let s = FRAC_1_SQRT_2;
    let matrix = match name {
        GateName::X01 => CMatrix::from_real_rows([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
        GateName::X12 => CMatrix::from_real_rows([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]),
        GateName::X20 => CMatrix::from_real_rows([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]),
        GateName::X1 | GateName::GenX | GateName::MSplus1 => shift_matrix(1),
        GateName::X2 | GateName::MSplus2 => shift_matrix(2),
        GateName::Z1 => CMatrix::from_real_rows([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]),
        GateName::Z2 => CMatrix::from_real_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]),
        GateName::Z12 => CMatrix::from_real_rows([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]),
        GateName::R1 | GateName::GenR => clock_matrix(1),
        GateName::R2 => clock_matrix(2),
        GateName::H01 => CMatrix::from_real_rows([[s, s, 0.0], [s, -s, 0.0], [0.0, 0.0, 1.0]]),
        GateName::H12 => CMatrix::from_real_rows([[1.0, 0.0, 0.0], [0.0, s, s], [0.0, s, -s]]),
        GateName::H20 => CMatrix::from_real_rows([[s, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, -s]]),
        GateName::C11 => controlled_increment(1),
        GateName::C21 => controlled_increment(2),
        GateName::Rtheta { theta, phi } => {
            for angle in [theta, phi] {
                if !angle.is_finite() {
                    return Err(QutritError::NonFiniteAngle(angle));
                }
            }
            rotation_matrix(theta, phi)
        }
    };
    GateOperator::new(name.symbol(), matrix)
}

pub(crate) fn fixed(name: GateName) -> GateOperator {
    build(name).expect("built-in gates are unitary")
}

/// `X^u R^v`, the generalized Pauli basis element.
pub fn generalized_pauli(u: usize, v: usize) -> CMatrix {
    shift_matrix(u % 3).matmul(&clock_matrix((v % 3) as i64))
}

/// Which pairwise swap a `Y` operator is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Swap {
    S01,
    S12,
    S20,
}

impl Swap {
    pub const ALL: [Swap; 3] = [Swap::S01, Swap::S12, Swap::S20];

    pub fn gate_name(self) -> GateName {
        match self {
            Swap::S01 => GateName::X01,
            Swap::S12 => GateName::X12,
            Swap::S20 => GateName::X20,
        }
    }
}

/// `Y_{mn,j} = i·Z_j·X_mn` for `j ∈ {1, 2}`.
pub fn y_operator(swap: Swap, phase: u8) -> Result<GateOperator> {
    let z = match phase {
        1 => fixed(GateName::Z1),
        2 => fixed(GateName::Z2),
        other => return Err(QutritError::UnknownGate(format!("Y phase index {other}"))),
    };
    let x = fixed(swap.gate_name());
    let m = z.matrix().matmul(x.matrix()).scale(c(0.0, 1.0));
    GateOperator::new(format!("iZ{phase}{}", x.label()), m)
}

/// Binary-ancilla flip controlled on a qutrit value: `|c,a⟩ → |c, a ⊕ [c == v]⟩`
/// with `a ∈ {0,1}`; the ancilla's `|2⟩` level is left untouched.
pub fn controlled_flip(control_value: u8) -> Result<GateOperator> {
    if control_value > 2 {
        return Err(QutritError::InvalidDigit(char::from(b'0' + control_value.min(9))));
    }
    let flip = fixed(GateName::X01);
    let mut m = CMatrix::zeros(9);
    for ctl in 0..3usize {
        for r in 0..3 {
            for col in 0..3 {
                let v = if ctl == control_value as usize {
                    flip.matrix()[(r, col)]
                } else if r == col {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                m[(ctl * 3 + r, ctl * 3 + col)] = v;
            }
        }
    }
    GateOperator::new(format!("CF{control_value}"), m)
}

/// Outcome of one algebraic identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
}

impl IdentityCheck {
    fn exact(name: impl Into<String>, lhs: &CMatrix, rhs: &CMatrix) -> Self {
        Self::within(name, lhs.max_abs_diff(rhs), EXACT_TOL)
    }

    fn within(name: impl Into<String>, deviation: f64, tol: f64) -> Self {
        Self { name: name.into(), passed: deviation <= tol, max_deviation: deviation }
    }
}

/// The four-term `I, Z1, Z2, Z12` expansion of `R_θφ` including its global phase.
pub fn rotation_from_z_terms(theta: f64, phi: f64) -> CMatrix {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (cp, sp) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let terms = [
        (c(ct * cp, 0.0), CMatrix::identity(3)),
        (c(0.0, -st * cp), fixed(GateName::Z1).matrix().clone()),
        (c(0.0, -ct * sp), fixed(GateName::Z2).matrix().clone()),
        (c(-st * sp, 0.0), fixed(GateName::Z12).matrix().clone()),
    ];
    let sum = terms.iter().fold(CMatrix::zeros(3), |acc, (k, m)| &acc + &m.scale(*k));
    sum.scale(Complex64::from_polar(1.0, (theta + phi) / 2.0))
}

/// The 5×5 grid of angle pairs used for the rotation identity.
pub fn rotation_grid() -> Vec<(f64, f64)> {
    let steps: Vec<f64> = (0..5).map(|k| TAU * k as f64 / 5.0).collect();
    steps.iter().flat_map(|&t| steps.iter().map(move |&p| (t, p))).collect()
}

fn closure_deviation(products: &[CMatrix], members: &[CMatrix]) -> f64 {
    products.iter().map(|p| members.iter().map(|m| p.max_abs_diff(m)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// Evaluates every identity between the named gates.
pub fn verify_identities() -> Vec<IdentityCheck> {
    let g = |name| fixed(name).matrix().clone();
    let id = CMatrix::identity(3);
    let (x1, x2) = (g(GateName::X1), g(GateName::X2));
    let (z1, z2, z12) = (g(GateName::Z1), g(GateName::Z2), g(GateName::Z12));
    let (h01, h20) = (g(GateName::H01), g(GateName::H20));
    let mut checks = vec![
        IdentityCheck::exact("X1·X1 = X2", &x1.matmul(&x1), &x2),
        IdentityCheck::exact("X2·X2 = X1", &x2.matmul(&x2), &x1),
        IdentityCheck::exact("X1·X2 = I", &x1.matmul(&x2), &id),
        IdentityCheck::exact("X1³ = I", &x1.pow(3), &id),
        IdentityCheck::exact("X2³ = I", &x2.pow(3), &id),
        IdentityCheck::exact("R³ = I", &g(GateName::GenR).pow(3), &id),
        IdentityCheck::exact("R1³ = I", &g(GateName::R1).pow(3), &id),
        IdentityCheck::exact("R2³ = I", &g(GateName::R2).pow(3), &id),
    ];

    for name in [
        GateName::X01,
        GateName::X12,
        GateName::X20,
        GateName::Z1,
        GateName::Z2,
        GateName::Z12,
        GateName::H01,
        GateName::H12,
        GateName::H20,
    ] {
        let m = g(name);
        checks.push(IdentityCheck::exact(format!("{name} self-adjoint"), &m, &m.adjoint()));
    }

    checks.push(IdentityCheck::exact("Z1·Z2 = Z12", &z1.matmul(&z2), &z12));
    checks.push(IdentityCheck::exact("Z2·Z1 = Z12", &z2.matmul(&z1), &z12));

    let z_set = [id.clone(), z1.clone(), z2.clone(), z12.clone()];
    let z_products: Vec<CMatrix> = z_set.iter().flat_map(|a| z_set.iter().map(move |b| a.matmul(b))).collect();
    checks.push(IdentityCheck::within("{I,Z1,Z2,Z12} closed", closure_deviation(&z_products, &z_set), EXACT_TOL));

    let bit_errors: Vec<CMatrix> =
        [GateName::X01, GateName::X12, GateName::X20, GateName::X1, GateName::X2].into_iter().map(g).collect();
    let mut bit_set = vec![id.clone()];
    bit_set.extend(bit_errors.iter().cloned());
    let bit_products: Vec<CMatrix> =
        bit_errors.iter().flat_map(|a| bit_errors.iter().map(move |b| a.matmul(b))).collect();
    checks.push(IdentityCheck::within(
        "bit errors closed under products",
        closure_deviation(&bit_products, &bit_set),
        EXACT_TOL,
    ));

    checks.push(IdentityCheck::exact("H01·Z1·H01 = X01", &h01.matmul(&z1).matmul(&h01), &g(GateName::X01)));
    checks.push(IdentityCheck::exact("H20·Z2·H20 = X20", &h20.matmul(&z2).matmul(&h20), &g(GateName::X20)));

    let grid = rotation_grid();
    let worst =
        grid.iter().map(|&(t, p)| rotation_from_z_terms(t, p).max_abs_diff(&rotation_matrix(t, p))).fold(0.0, f64::max);
    let within = grid
        .iter()
        .filter(|&&(t, p)| rotation_from_z_terms(t, p).max_abs_diff(&rotation_matrix(t, p)) <= EXACT_TOL)
        .count();
    checks.push(IdentityCheck::within(
        format!("rotation Z-term expansion {within}/{} within 1e-12", grid.len()),
        worst,
        EXACT_TOL,
    ));

    checks.push(IdentityCheck::exact(
        "R1 = R(2π/3, 4π/3)",
        &g(GateName::R1),
        &rotation_matrix(2.0 * PI / 3.0, 4.0 * PI / 3.0),
    ));
    checks.push(IdentityCheck::exact(
        "R2 = R(4π/3, 2π/3)",
        &g(GateName::R2),
        &rotation_matrix(4.0 * PI / 3.0, 2.0 * PI / 3.0),
    ));
    checks.push(IdentityCheck::exact("X = X1", &g(GateName::GenX), &x1));
    checks.push(IdentityCheck::exact("R = R1", &g(GateName::GenR), &g(GateName::R1)));
    checks.push(IdentityCheck::exact("MS+1 = X1", &g(GateName::MSplus1), &x1));
    checks.push(IdentityCheck::exact("MS+2 = X2", &g(GateName::MSplus2), &x2));
    checks.push(IdentityCheck::exact(
        "R·X = ω·X·R",
        &g(GateName::GenR).matmul(&x1),
        &x1.matmul(&g(GateName::GenR)).scale(omega()),
    ));
    checks
}
