//! Qutrit registers and strided gate application.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QutritError, Result};
use crate::gates::GateOperator;
use crate::NORM_TOL;

/// Largest register the simulator will allocate (3^12 amplitudes).
pub const MAX_QUTRITS: usize = 12;

/// Normalized pure state of `n` qutrits.
///
/// Amplitude `i` belongs to the basis state whose base-3 expansion of `i`
/// (padded to `n` digits) lists the qutrit values, qutrit 0 first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QutritRegister {
    n: usize,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUTRITS {
        return Err(QutritError::QutritCount(n));
    }
    Ok(())
}

/// Index of the basis state with the given digits (qutrit 0 first).
pub fn basis_index(digits: &[u8]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * 3 + d as usize)
}

/// Digits of basis index `index` in an `n`-qutrit register.
pub fn digits_of(mut index: usize, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    for slot in out.iter_mut().rev() {
        *slot = (index % 3) as u8;
        index /= 3;
    }
    out
}

pub fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            other => Err(QutritError::InvalidDigit(other)),
        })
        .collect()
}

impl QutritRegister {
    /// Computational basis state `|digits⟩` on `n` qutrits.
    pub fn basis(n: usize, digits: &str) -> Result<Self> {
        check_size(n)?;
        let digits = parse_digits(digits)?;
        if digits.len() != n {
            return Err(QutritError::DigitCount { expected: n, actual: digits.len() });
        }
        Self::from_digits(&digits)
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        let n = digits.len();
        check_size(n)?;
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(QutritError::InvalidDigit(char::from_digit(d as u32, 10).unwrap_or('?')));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); pow3(n)];
        amplitudes[basis_index(digits)] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    /// Wraps an amplitude vector that must already be normalized.
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amplitudes.len() != pow3(n) {
            return Err(QutritError::LengthMismatch { expected: pow3(n), actual: amplitudes.len() });
        }
        let state = Self { n, amplitudes };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(QutritError::NotNormalized(norm_sqr));
        }
        Ok(state)
    }

    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn normalized(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amplitudes.len() != pow3(n) {
            return Err(QutritError::LengthMismatch { expected: pow3(n), actual: amplitudes.len() });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(QutritError::NotNormalized(norm * norm));
        }
        Ok(Self { n, amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    /// Product state from single-qutrit amplitude triples (normalized as a whole).
    pub fn product(factors: &[[Complex64; 3]]) -> Result<Self> {
        check_size(factors.len())?;
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amplitudes = amplitudes.iter().flat_map(|&a| f.iter().map(move |&b| a * b)).collect();
        }
        Self::normalized(factors.len(), amplitudes)
    }

    /// `self ⊗ other`, with `self` occupying the low-numbered qutrits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_size(self.n + other.n)?;
        let amplitudes = self.amplitudes.iter().flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b)).collect();
        Ok(Self { n: self.n + other.n, amplitudes })
    }

    pub fn qutrits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, digits: &[u8]) -> Complex64 {
        self.amplitudes[basis_index(digits)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(QutritError::DimensionMismatch(self.n, other.n));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// Applies a unitary gate in place at `positions` (identity elsewhere).
    pub fn apply(&mut self, gate: &GateOperator, positions: &[usize]) -> Result<()> {
        if !gate.is_unitary() {
            return Err(QutritError::NotUnitary {
                label: gate.label().to_string(),
                deviation: gate.unitarity_deviation(),
            });
        }
        if gate.arity() != positions.len() {
            return Err(QutritError::ArityMismatch { arity: gate.arity(), given: positions.len() });
        }
        self.apply_rows(gate.sparse_rows(), positions)
    }

    /// Functional form of [`apply`](Self::apply).
    pub fn applied(&self, gate: &GateOperator, positions: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply(gate, positions)?;
        Ok(out)
    }

    pub(crate) fn validate_positions(&self, positions: &[usize]) -> Result<()> {
        for (i, &p) in positions.iter().enumerate() {
            if p >= self.n {
                return Err(QutritError::PositionOutOfRange { position: p, n: self.n });
            }
            if positions[..i].contains(&p) {
                return Err(QutritError::RepeatedPosition(p));
            }
        }
        Ok(())
    }

    /// Strided kernel: for every assignment of the untouched qutrits, gathers
    /// the `3^k` amplitudes addressed by `positions`, multiplies by the local
    /// operator (given as sparse rows) and scatters the result back.
    pub(crate) fn apply_rows(&mut self, rows: &[Vec<(usize, Complex64)>], positions: &[usize]) -> Result<()> {
        self.validate_positions(positions)?;
        let local_dim = pow3(positions.len());
        if rows.len() != local_dim {
            return Err(QutritError::ArityMismatch { arity: rows.len(), given: positions.len() });
        }
        let strides: Vec<usize> = positions.iter().map(|&p| pow3(self.n - 1 - p)).collect();
        let offsets: Vec<usize> = (0..local_dim)
            .map(|local| digits_of(local, positions.len()).iter().zip(&strides).map(|(&d, &s)| d as usize * s).sum())
            .collect();

        let mut gathered = vec![Complex64::new(0.0, 0.0); local_dim];
        for base in 0..self.amplitudes.len() {
            if strides.iter().any(|&s| (base / s) % 3 != 0) {
                continue;
            }
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base + off];
            }
            for (row, &off) in rows.iter().zip(&offsets) {
                self.amplitudes[base + off] = row.iter().map(|&(c, v)| v * gathered[c]).sum();
            }
        }
        Ok(())
    }

    pub(crate) fn scale_in_place(&mut self, factor: f64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }
}

/// `|⟨a|b⟩|`, the overlap modulus of two pure states.
pub fn fidelity(a: &QutritRegister, b: &QutritRegister) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{build, GateName};
    use crate::matrix::CMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qutrit_basis_state() {
        let r = QutritRegister::basis(1, "0").unwrap();
        assert_eq!(r.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn positional_encoding_is_most_significant_first() {
        let r = QutritRegister::basis(3, "201").unwrap();
        let hot: Vec<usize> =
            r.amplitudes().iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(i, _)| i).collect();
        assert_eq!(hot, vec![19]);
    }

    #[test]
    fn nine_qutrit_basis_state() {
        let r = QutritRegister::basis(9, "000000000").unwrap();
        assert_eq!(r.dim(), 19683);
        assert_eq!(r.amplitudes()[0], c(1.0, 0.0));
        assert_eq!(r.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn make_register_rejects_bad_input() {
        assert_eq!(QutritRegister::basis(2, "03"), Err(QutritError::InvalidDigit('3')));
        assert_eq!(QutritRegister::basis(0, ""), Err(QutritError::QutritCount(0)));
        assert_eq!(QutritRegister::basis(13, "0000000000000"), Err(QutritError::QutritCount(13)));
        assert!(matches!(QutritRegister::basis(2, "0"), Err(QutritError::DigitCount { .. })));
    }

    #[test]
    fn shift_gates_act_on_the_addressed_qutrit() {
        let x1 = build(GateName::X1).unwrap();
        let r = QutritRegister::basis(1, "0").unwrap().applied(&x1, &[0]).unwrap();
        assert_eq!(r, QutritRegister::basis(1, "1").unwrap());

        let r = QutritRegister::basis(3, "000").unwrap().applied(&x1, &[1]).unwrap();
        assert_eq!(r, QutritRegister::basis(3, "010").unwrap());
    }

    #[test]
    fn anticlockwise_shift_on_general_qutrit() {
        let (alpha, beta, gamma) = (c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0));
        let psi = QutritRegister::product(&[[alpha, beta, gamma]]).unwrap();
        let out = psi.applied(&build(GateName::X2).unwrap(), &[0]).unwrap();
        let expected = [beta, gamma, alpha];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn two_qutrit_gate_uses_first_position_as_control() {
        let c11 = build(GateName::C11).unwrap();
        let r = QutritRegister::basis(3, "120").unwrap();
        // control = qutrit 0 (value 1), target = qutrit 2
        let out = r.applied(&c11, &[0, 2]).unwrap();
        assert_eq!(out, QutritRegister::basis(3, "121").unwrap());
        // reversed positions: control is qutrit 2 (value 0) -> no-op
        let out = r.applied(&c11, &[2, 0]).unwrap();
        assert_eq!(out, r);
    }

    #[test]
    fn apply_rejects_position_errors() {
        let x1 = build(GateName::X1).unwrap();
        let c11 = build(GateName::C11).unwrap();
        let mut r = QutritRegister::basis(2, "00").unwrap();
        assert_eq!(r.apply(&x1, &[2]), Err(QutritError::PositionOutOfRange { position: 2, n: 2 }));
        assert_eq!(r.apply(&c11, &[1, 1]), Err(QutritError::RepeatedPosition(1)));
        assert!(matches!(r.apply(&x1, &[0, 1]), Err(QutritError::ArityMismatch { .. })));
    }

    #[test]
    fn apply_rejects_non_unitary() {
        let m = CMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        let g = GateOperator::general("D", m).unwrap();
        let mut r = QutritRegister::basis(1, "0").unwrap();
        assert!(matches!(r.apply(&g, &[0]), Err(QutritError::NotUnitary { .. })));
    }

    #[test]
    fn fidelity_of_basis_states() {
        let a = QutritRegister::basis(1, "0").unwrap();
        let b = QutritRegister::basis(1, "1").unwrap();
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&a, &b).unwrap().abs() < 1e-12);
        let c3 = QutritRegister::basis(2, "00").unwrap();
        assert_eq!(fidelity(&a, &c3), Err(QutritError::DimensionMismatch(1, 2)));
    }

    #[test]
    fn from_amplitudes_checks_norm() {
        assert!(matches!(
            QutritRegister::from_amplitudes(1, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            Err(QutritError::NotNormalized(_))
        ));
    }
}
