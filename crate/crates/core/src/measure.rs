//! Projective measurement.
//!
//! A [`ProjectorFamily`] holds local projectors on `k` qutrits; measuring it
//! at `k` chosen positions of a register samples an outcome with the Born
//! rule and returns the renormalized post-measurement state.
//!
//! Outcome selection goes through [`OutcomeSource`]. Any `RngCore` samples;
//! a [`BranchScript`] instead replays a fixed path of outcomes so callers can
//! enumerate every measurement branch of a procedure deterministically.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{QutritError, Result};
use crate::gates::GateOperator;
use crate::matrix::{CMatrix, SparseRows};
use crate::register::QutritRegister;
use crate::{omega_pow, NORM_TOL, OPERATOR_TOL};

/// Probability below which an outcome is treated as impossible.
pub const OUTCOME_EPS: f64 = 1e-12;

/// An eigenvalue `ω^k` of an order-3 operator. Serializes as `"1"`, `"w"`, `"w2"`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OmegaPower {
    #[default]
    #[serde(rename = "1")]
    One,
    #[serde(rename = "w")]
    Omega,
    #[serde(rename = "w2")]
    OmegaSquared,
}

impl OmegaPower {
    pub const ALL: [OmegaPower; 3] = [OmegaPower::One, OmegaPower::Omega, OmegaPower::OmegaSquared];

    pub fn from_exponent(k: i64) -> Self {
        Self::ALL[k.rem_euclid(3) as usize]
    }

    pub fn exponent(self) -> u8 {
        self as u8
    }

    pub fn value(self) -> Complex64 {
        omega_pow(self.exponent() as i64)
    }

    pub fn is_trivial(self) -> bool {
        self == OmegaPower::One
    }
}

impl fmt::Display for OmegaPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaPower::One => "1",
            OmegaPower::Omega => "w",
            OmegaPower::OmegaSquared => "w2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeLabel {
    Eigenvalue(OmegaPower),
    /// Computational-basis value of the measured qutrits (qutrit order).
    Digits(Vec<u8>),
}

impl OutcomeLabel {
    pub fn eigenvalue(&self) -> Option<OmegaPower> {
        match self {
            OutcomeLabel::Eigenvalue(w) => Some(*w),
            OutcomeLabel::Digits(_) => None,
        }
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeLabel::Eigenvalue(w) => write!(f, "{w}"),
            OutcomeLabel::Digits(d) => d.iter().try_for_each(|x| write!(f, "{x}")),
        }
    }
}

/// Complete family of orthogonal projectors on `k` qutrits.
#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    arity: usize,
    projectors: Vec<CMatrix>,
    labels: Vec<OutcomeLabel>,
    rows: Arc<Vec<SparseRows>>,
}

impl ProjectorFamily {
    /// Validates Hermiticity, idempotence and completeness to 1e-10.
    pub fn new(projectors: Vec<CMatrix>, labels: Vec<OutcomeLabel>) -> Result<Self> {
        let invalid = |msg: String| Err(QutritError::InvalidProjectorFamily(msg));
        if projectors.is_empty() || projectors.len() != labels.len() {
            return invalid(format!("{} projectors for {} labels", projectors.len(), labels.len()));
        }
        let dim = projectors[0].dim();
        let mut arity = 0;
        let mut d = dim;
        while d > 1 && d % 3 == 0 {
            d /= 3;
            arity += 1;
        }
        if d != 1 || arity == 0 {
            return Err(QutritError::BadDimension(dim));
        }
        let mut sum = CMatrix::zeros(dim);
        for (p, label) in projectors.iter().zip(&labels) {
            if p.dim() != dim {
                return invalid(format!("projector {label} has dimension {} (expected {dim})", p.dim()));
            }
            if !p.is_hermitian(OPERATOR_TOL) {
                return invalid(format!("projector {label} is not Hermitian"));
            }
            if p.matmul(p).max_abs_diff(p) > OPERATOR_TOL {
                return invalid(format!("projector {label} is not idempotent"));
            }
            sum = &sum + p;
        }
        let completeness = sum.max_abs_diff(&CMatrix::identity(dim));
        if completeness > OPERATOR_TOL {
            return invalid(format!("projectors do not sum to identity (deviation {completeness:e})"));
        }
        let rows = Arc::new(projectors.iter().map(CMatrix::sparse_rows).collect());
        Ok(Self { arity, projectors, labels, rows })
    }

    /// Projectors onto each computational-basis value of `arity` qutrits.
    pub fn computational(arity: usize) -> Result<Self> {
        let dim = 3usize.pow(arity as u32);
        let projectors = (0..dim)
            .map(|i| {
                let mut p = CMatrix::zeros(dim);
                p[(i, i)] = Complex64::new(1.0, 0.0);
                p
            })
            .collect();
        let labels = (0..dim).map(|i| OutcomeLabel::Digits(crate::register::digits_of(i, arity))).collect();
        Self::new(projectors, labels)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }

    fn check_placement(&self, state: &QutritRegister, positions: &[usize]) -> Result<()> {
        if positions.len() != self.arity {
            return Err(QutritError::ArityMismatch { arity: self.arity, given: positions.len() });
        }
        state.validate_positions(positions)
    }

    /// `P_k|ψ⟩` for every outcome `k` (unnormalized).
    pub fn project_all(&self, state: &QutritRegister, positions: &[usize]) -> Result<Vec<QutritRegister>> {
        self.check_placement(state, positions)?;
        self.rows
            .iter()
            .map(|rows| {
                let mut branch = state.clone();
                branch.apply_rows(rows, positions)?;
                Ok(branch)
            })
            .collect()
    }

    /// Born-rule probabilities `⟨ψ|P_k|ψ⟩`.
    pub fn probabilities(&self, state: &QutritRegister, positions: &[usize]) -> Result<Vec<f64>> {
        Ok(self.project_all(state, positions)?.iter().map(QutritRegister::norm_sqr).collect())
    }
}

/// Chooses one outcome given the Born probabilities.
pub trait OutcomeSource {
    fn select(&mut self, probabilities: &[f64]) -> usize;
}

impl<R: RngCore> OutcomeSource for R {
    fn select(&mut self, probabilities: &[f64]) -> usize {
        let total: f64 = probabilities.iter().sum();
        let r = self.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut last_possible = 0;
        for (k, &p) in probabilities.iter().enumerate() {
            if p <= OUTCOME_EPS {
                continue;
            }
            last_possible = k;
            acc += p;
            if r < acc {
                return k;
            }
        }
        last_possible
    }
}

/// Replays a fixed prefix of outcome indices, then takes the first possible
/// outcome at every later measurement while logging the probabilities seen.
#[derive(Clone, Debug, Default)]
pub struct BranchScript {
    forced: Vec<usize>,
    cursor: usize,
    taken: Vec<usize>,
    seen: Vec<Vec<f64>>,
}

impl BranchScript {
    pub fn new(forced: Vec<usize>) -> Self {
        Self { forced, ..Self::default() }
    }

    /// Outcome index chosen at each measurement of the run.
    pub fn path(&self) -> &[usize] {
        &self.taken
    }

    /// Product of the chosen outcomes' probabilities.
    pub fn probability(&self) -> f64 {
        self.taken.iter().zip(&self.seen).map(|(&k, probs)| probs[k]).product()
    }
}

impl OutcomeSource for BranchScript {
    fn select(&mut self, probabilities: &[f64]) -> usize {
        let choice = match self.forced.get(self.cursor) {
            Some(&k) => k,
            None => probabilities.iter().position(|&p| p > OUTCOME_EPS).unwrap_or(0),
        };
        self.cursor += 1;
        self.taken.push(choice);
        self.seen.push(probabilities.to_vec());
        choice
    }
}

/// One fully determined path through a procedure's measurements.
#[derive(Clone, Debug)]
pub struct Branch<T> {
    pub path: Vec<usize>,
    pub probability: f64,
    pub value: T,
}

/// Runs `procedure` once per possible measurement branch (depth first).
///
/// Branch probabilities sum to one when every measurement inside
/// `procedure` draws from the supplied source.
pub fn enumerate_branches<T, E>(
    mut procedure: impl FnMut(&mut BranchScript) -> std::result::Result<T, E>,
) -> std::result::Result<Vec<Branch<T>>, E> {
    let mut pending = vec![Vec::new()];
    let mut branches = Vec::new();
    while let Some(prefix) = pending.pop() {
        let mut script = BranchScript::new(prefix.clone());
        let value = procedure(&mut script)?;
        for step in prefix.len()..script.taken.len() {
            let chosen = script.taken[step];
            for (alt, &p) in script.seen[step].iter().enumerate().skip(chosen + 1) {
                if p > OUTCOME_EPS {
                    let mut next = script.taken[..step].to_vec();
                    next.push(alt);
                    pending.push(next);
                }
            }
        }
        branches.push(Branch { probability: script.probability(), path: script.taken, value });
    }
    Ok(branches)
}

/// Measures `family` on the qutrits at `positions`.
///
/// Returns the outcome label and `P_k|ψ⟩ / ‖P_k|ψ⟩‖`.
pub fn measure(
    state: &QutritRegister,
    family: &ProjectorFamily,
    positions: &[usize],
    source: &mut impl OutcomeSource,
) -> Result<(OutcomeLabel, QutritRegister)> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(QutritError::NotNormalized(norm_sqr));
    }
    let branches = family.project_all(state, positions)?;
    let probabilities: Vec<f64> = branches.iter().map(QutritRegister::norm_sqr).collect();
    if probabilities.iter().all(|&p| p < OUTCOME_EPS) {
        return Err(QutritError::InconsistentFamily);
    }
    let k = source.select(&probabilities);
    if probabilities[k] < OUTCOME_EPS {
        return Err(QutritError::InconsistentFamily);
    }
    let mut collapsed = branches.into_iter().nth(k).expect("index from probabilities");
    collapsed.scale_in_place(probabilities[k].sqrt().recip());
    Ok((family.labels[k].clone(), collapsed))
}

/// Eigenprojectors of an operator with `M³ = I`:
/// `P_k = (1/3) Σ_j ω^{-kj} M^j`, labelled by the eigenvalue `ω^k`.
pub fn eigenprojectors_order3(gate: &GateOperator) -> Result<ProjectorFamily> {
    let m1 = gate.matrix().clone();
    let m2 = m1.matmul(&m1);
    let m3 = m2.matmul(&m1);
    let dim = m1.dim();
    if m3.max_abs_diff(&CMatrix::identity(dim)) > OPERATOR_TOL {
        return Err(QutritError::NotOrder3(gate.label().to_string()));
    }
    let powers = [CMatrix::identity(dim), m1, m2];
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let projectors = (0..3i64)
        .map(|k| {
            powers
                .iter()
                .enumerate()
                .fold(CMatrix::zeros(dim), |acc, (j, mj)| &acc + &mj.scale(omega_pow(-k * j as i64) * third))
        })
        .collect();
    let labels = OmegaPower::ALL.iter().map(|&w| OutcomeLabel::Eigenvalue(w)).collect();
    ProjectorFamily::new(projectors, labels)
}
