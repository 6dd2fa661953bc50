//! Gate vocabulary shared by the simulated protocol and the ideal-matrix
//! circuit checks.

use alloc::{vec, vec::Vec};
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use core::fmt;

use num_complex::Complex64 as C64;

use crate::{Error, Result};

pub type Matrix2 = [[C64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    CSign,
    CNot,
    Hadamard,
    S,
    T,
    TDagger,
    Toffoli,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Hadamard | GateKind::S | GateKind::T | GateKind::TDagger => 1,
            GateKind::CSign | GateKind::CNot => 2,
            GateKind::Toffoli => 3,
        }
    }

    /// 2x2 matrix on {|0>, |1>} for single-qubit kinds.
    pub fn matrix(self) -> Option<Matrix2> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            GateKind::Hadamard => Some([[h, h], [h, -h]]),
            GateKind::S => Some([[one, zero], [zero, C64::new(0.0, 1.0)]]),
            GateKind::T => Some([[one, zero], [zero, C64::from_polar(1.0, FRAC_PI_4)]]),
            GateKind::TDagger => Some([[one, zero], [zero, C64::from_polar(1.0, -FRAC_PI_4)]]),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::CSign => "CSIGN",
            GateKind::CNot => "CNOT",
            GateKind::Hadamard => "H",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::TDagger => "TDG",
            GateKind::Toffoli => "TOFFOLI",
        }
    }
}

/// A gate together with the atoms it acts on. Operand order matters:
/// controls first, target last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateSpec {
    kind: GateKind,
    operands: Vec<usize>,
}

impl GateSpec {
    pub fn new(kind: GateKind, operands: Vec<usize>) -> Result<Self> {
        if operands.len() != kind.arity() {
            return Err(Error::OperandMismatch { expected: kind.arity(), got: operands.len() });
        }
        for (i, a) in operands.iter().enumerate() {
            if operands[..i].contains(a) {
                return Err(Error::InvalidPair { index: *a });
            }
        }
        Ok(GateSpec { kind, operands })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    pub(crate) fn single(kind: GateKind, atom: usize) -> Self {
        GateSpec { kind, operands: vec![atom] }
    }

    pub(crate) fn cnot(control: usize, target: usize) -> Self {
        GateSpec { kind: GateKind::CNot, operands: vec![control, target] }
    }

    /// True when the two-qubit gate spans non-adjacent register positions.
    pub fn is_non_neighbor(&self) -> bool {
        match self.operands.as_slice() {
            [a, b] => a.abs_diff(*b) > 1,
            _ => false,
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name())?;
        for (i, q) in self.operands.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str(")")
    }
}

/// Toffoli as six CNOTs plus H, T, T† and S. The two CNOTs between the
/// first control and the target are the non-neighbour steps.
pub fn toffoli_sequence(c1: usize, c2: usize, target: usize) -> Vec<GateSpec> {
    use GateKind::*;
    vec![
        GateSpec::single(Hadamard, target),
        GateSpec::cnot(c2, target),
        GateSpec::single(TDagger, target),
        GateSpec::cnot(c1, target),
        GateSpec::single(T, target),
        GateSpec::cnot(c2, target),
        GateSpec::single(TDagger, target),
        GateSpec::cnot(c1, target),
        GateSpec::single(TDagger, c2),
        GateSpec::single(T, target),
        GateSpec::cnot(c1, c2),
        GateSpec::single(TDagger, c2),
        GateSpec::cnot(c1, c2),
        GateSpec::single(S, c2),
        GateSpec::single(T, c1),
        GateSpec::single(Hadamard, target),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = GateKind::Hadamard.matrix().unwrap();
        let hh = mul(&h, &h);
        assert!((hh[0][0] - 1.0).norm() < 1e-12 && (hh[1][1] - 1.0).norm() < 1e-12);
        assert!(hh[0][1].norm() < 1e-12 && hh[1][0].norm() < 1e-12);
    }

    #[test]
    fn t_squared_is_s() {
        let t = GateKind::T.matrix().unwrap();
        let s = GateKind::S.matrix().unwrap();
        let tt = mul(&t, &t);
        assert!((tt[1][1] - s[1][1]).norm() < 1e-15);
        let tdg = GateKind::TDagger.matrix().unwrap();
        assert!((mul(&t, &tdg)[1][1] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn operand_count_is_checked() {
        assert_eq!(
            GateSpec::new(GateKind::CNot, vec![0]).unwrap_err(),
            Error::OperandMismatch { expected: 2, got: 1 }
        );
        assert!(GateSpec::new(GateKind::Toffoli, vec![0, 1, 1]).is_err());
        assert!(GateSpec::new(GateKind::Hadamard, vec![3]).is_ok());
    }

    #[test]
    fn toffoli_sequence_shape() {
        let seq = toffoli_sequence(0, 1, 2);
        assert_eq!(seq.iter().filter(|g| g.kind() == GateKind::CNot).count(), 6);
        assert_eq!(seq.iter().filter(|g| g.is_non_neighbor()).count(), 2);
    }
}
