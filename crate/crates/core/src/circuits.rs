//! Cost of non-neighbour gates under nearest-neighbour routing, and exact
//! checks of the circuit identities the protocol relies on.
//!
//! [`QubitMatrix`] uses the register convention of [`hilbert`]: qubit k is
//! bit k of the basis index (qubit 0 least significant).
//!
//! [`hilbert`]: crate::hilbert

use alloc::{format, vec, vec::Vec};
use core::ops::Mul;

use num_complex::Complex64 as C64;
use num_traits::{One, Zero};

use crate::gates::{toffoli_sequence, GateKind, GateSpec, Matrix2};
use crate::hilbert::{basis_state, AtomLevel, BasisIndex};
use crate::protocol::Engine;
use crate::{Error, Result};

pub const DEFAULT_FAULT_FACTOR: u64 = 10;
/// Tolerance for identities between ideal matrices.
pub const IDEAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostModel {
    pub n_qubits: usize,
    /// Error-correcting operations per fault-tolerant CNOT.
    pub fault_factor: u64,
}

impl CostModel {
    pub fn new(n_qubits: usize, fault_factor: u64) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidCostModel(format!("need at least 2 qubits, got {n_qubits}")));
        }
        if fault_factor < 1 {
            return Err(Error::InvalidCostModel("fault factor must be >= 1".into()));
        }
        Ok(CostModel { n_qubits, fault_factor })
    }
}

/// Operation counts for one two-qubit gate between the first and last qubit
/// of a linear chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub n_qubits: usize,
    pub fault_factor: u64,
    /// SWAPs to bring the last qubit next to the first and back.
    pub swap_ops: u64,
    pub extra_cnots: u64,
    pub extra_ft_ops: u64,
    /// Operations for the same gate with a direct non-local interaction.
    pub nonlocal_ops: u64,
    /// Extra CNOTs of the direct four-CNOT chain, defined for N <= 3.
    pub chain_extra_cnots: Option<u64>,
}

pub fn nonlocal_gate_cost(model: &CostModel) -> Result<CostReport> {
    let model = CostModel::new(model.n_qubits, model.fault_factor)?;
    let span = (model.n_qubits - 2) as u64;
    let swap_ops = 2 * span;
    let extra_cnots = 3 * swap_ops;
    Ok(CostReport {
        n_qubits: model.n_qubits,
        fault_factor: model.fault_factor,
        swap_ops,
        extra_cnots,
        extra_ft_ops: model.fault_factor * extra_cnots,
        nonlocal_ops: 1,
        chain_extra_cnots: match model.n_qubits {
            2 => Some(0),
            3 => Some(nonlocal_cnot_chain_gates().len() as u64 - 1),
            _ => None,
        },
    })
}

/// Dense 2^n x 2^n unitary on a qubit register, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitMatrix {
    n_qubits: usize,
    data: Vec<C64>,
}

impl QubitMatrix {
    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut data = vec![C64::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::one();
        }
        QubitMatrix { n_qubits, data }
    }

    pub fn from_dense(n_qubits: usize, data: Vec<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::InvalidShape(format!("{} entries for a {dim}x{dim} matrix", data.len())));
        }
        Ok(QubitMatrix { n_qubits, data })
    }

    /// Permutation matrix of a classical reversible map on basis indices.
    fn permutation(n_qubits: usize, f: impl Fn(usize) -> usize) -> Self {
        let dim = 1 << n_qubits;
        let mut data = vec![C64::zero(); dim * dim];
        for x in 0..dim {
            data[f(x) * dim + x] = C64::one();
        }
        QubitMatrix { n_qubits, data }
    }

    pub fn single(n_qubits: usize, qubit: usize, gate: &Matrix2) -> Self {
        let dim = 1 << n_qubits;
        let mut data = vec![C64::zero(); dim * dim];
        let bit = 1 << qubit;
        for x in 0..dim {
            let xin = (x & bit != 0) as usize;
            for (yin, row) in gate.iter().enumerate() {
                let y = if yin == 1 { x | bit } else { x & !bit };
                data[y * dim + x] = row[xin];
            }
        }
        QubitMatrix { n_qubits, data }
    }

    pub fn cnot(n_qubits: usize, control: usize, target: usize) -> Self {
        Self::permutation(n_qubits, |x| if x >> control & 1 == 1 { x ^ (1 << target) } else { x })
    }

    pub fn swap(n_qubits: usize, a: usize, b: usize) -> Self {
        Self::permutation(n_qubits, |x| {
            if (x >> a & 1) != (x >> b & 1) { x ^ (1 << a) ^ (1 << b) } else { x }
        })
    }

    pub fn toffoli(n_qubits: usize, c1: usize, c2: usize, target: usize) -> Self {
        Self::permutation(n_qubits, |x| {
            if x >> c1 & 1 == 1 && x >> c2 & 1 == 1 { x ^ (1 << target) } else { x }
        })
    }

    pub fn csign(n_qubits: usize, a: usize, b: usize) -> Self {
        let mut m = Self::identity(n_qubits);
        let dim = m.dim();
        for x in 0..dim {
            if x >> a & 1 == 1 && x >> b & 1 == 1 {
                m.data[x * dim + x] = -C64::one();
            }
        }
        m
    }

    pub fn for_gate(n_qubits: usize, gate: &GateSpec) -> Self {
        let ops = gate.operands();
        match gate.kind() {
            GateKind::CNot => Self::cnot(n_qubits, ops[0], ops[1]),
            GateKind::CSign => Self::csign(n_qubits, ops[0], ops[1]),
            GateKind::Toffoli => Self::toffoli(n_qubits, ops[0], ops[1], ops[2]),
            kind => Self::single(n_qubits, ops[0], &kind.matrix().expect("single-qubit gate")),
        }
    }

    /// Product of a gate list, first gate applied first.
    pub fn compose(n_qubits: usize, gates: &[GateSpec]) -> Self {
        gates
            .iter()
            .fold(Self::identity(n_qubits), |acc, g| &Self::for_gate(n_qubits, g) * &acc)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        let dim = self.dim();
        self.data[row * dim + col] = value;
    }

    pub fn max_abs_diff(&self, other: &QubitMatrix) -> f64 {
        assert_eq!(self.n_qubits, other.n_qubits, "register size mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Deviation from `ideal` after removing the global phase arg tr(ideal† M).
    pub fn phase_aligned_diff(&self, ideal: &QubitMatrix) -> f64 {
        let overlap: C64 = ideal.data.iter().zip(&self.data).map(|(i, m)| i.conj() * m).sum();
        let unphase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { C64::one() };
        self.data
            .iter()
            .zip(&ideal.data)
            .map(|(m, i)| (m * unphase - i).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &QubitMatrix {
    type Output = QubitMatrix;

    fn mul(self, rhs: &QubitMatrix) -> QubitMatrix {
        assert_eq!(self.n_qubits, rhs.n_qubits, "register size mismatch");
        let dim = self.dim();
        let mut data = vec![C64::zero(); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * rhs.get(k, c);
                }
            }
        }
        QubitMatrix { n_qubits: self.n_qubits, data }
    }
}

/// Outcome of one identity check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Verification {
    pub fn new(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        Verification { name, passed: max_deviation <= tolerance, max_deviation, tolerance }
    }
}

/// CNOT(a,b) · CNOT(b,a) · CNOT(a,b) on two qubits.
pub fn swap_via_cnots() -> QubitMatrix {
    let gates = [GateSpec::cnot(0, 1), GateSpec::cnot(1, 0), GateSpec::cnot(0, 1)];
    QubitMatrix::compose(2, &gates)
}

/// Nearest-neighbour CNOTs realizing CNOT(0 -> 2) on three qubits.
pub fn nonlocal_cnot_chain_gates() -> Vec<GateSpec> {
    vec![GateSpec::cnot(1, 2), GateSpec::cnot(0, 1), GateSpec::cnot(1, 2), GateSpec::cnot(0, 1)]
}

pub fn nonlocal_cnot_chain() -> QubitMatrix {
    QubitMatrix::compose(3, &nonlocal_cnot_chain_gates())
}

/// SWAP from three CNOTs, and the nearest-neighbour chain for CNOT(0 -> 2).
pub fn verify_swap_decomposition() -> [Verification; 2] {
    [
        Verification::new("swap = 3 cnot", swap_via_cnots().max_abs_diff(&QubitMatrix::swap(2, 0, 1)), 0.0),
        Verification::new(
            "nearest-neighbour chain = cnot(0,2)",
            nonlocal_cnot_chain().max_abs_diff(&QubitMatrix::cnot(3, 0, 2)),
            0.0,
        ),
    ]
}

/// (I ⊗ H) · C-Sign · (I ⊗ H) with H on `on` (the target is qubit 1).
pub fn hadamard_conjugated_csign(on: usize) -> QubitMatrix {
    let h = QubitMatrix::single(2, on, &GateKind::Hadamard.matrix().unwrap());
    &(&h * &QubitMatrix::csign(2, 0, 1)) * &h
}

pub fn verify_cnot_csign_equivalence() -> [Verification; 2] {
    let h = QubitMatrix::single(2, 1, &GateKind::Hadamard.matrix().unwrap());
    let back = &(&h * &QubitMatrix::cnot(2, 0, 1)) * &h;
    [
        Verification::new(
            "H(t) csign H(t) = cnot",
            hadamard_conjugated_csign(1).max_abs_diff(&QubitMatrix::cnot(2, 0, 1)),
            IDEAL_TOL,
        ),
        Verification::new("H(t) cnot H(t) = csign", back.max_abs_diff(&QubitMatrix::csign(2, 0, 1)), IDEAL_TOL),
    ]
}

pub fn verify_toffoli_decomposition() -> Verification {
    let composed = QubitMatrix::compose(3, &toffoli_sequence(0, 1, 2));
    Verification::new(
        "toffoli decomposition = toffoli",
        composed.phase_aligned_diff(&QubitMatrix::toffoli(3, 0, 1, 2)),
        IDEAL_TOL,
    )
}

/// Rebuilds the qubit-subspace matrix of a simulated gate sequence column by
/// column from basis-state inputs (cavity in vacuum).
pub fn simulated_matrix(engine: &Engine, n_qubits: usize, gates: &[GateSpec], n_max: usize) -> Result<QubitMatrix> {
    let dim = 1usize << n_qubits;
    let mut m = QubitMatrix::from_dense(n_qubits, vec![C64::zero(); dim * dim])?;
    let levels = |x: usize| -> Vec<AtomLevel> { (0..n_qubits).map(|k| AtomLevel::qubit(x >> k & 1 == 1)).collect() };
    let out_index: Vec<usize> = (0..dim)
        .map(|y| BasisIndex::new(levels(y), 0).flatten(n_max))
        .collect::<Result<_>>()?;
    for x in 0..dim {
        let input = basis_state(&levels(x), 0, n_max)?;
        let out = engine.run(&input, gates)?.final_state;
        for (y, &flat) in out_index.iter().enumerate() {
            m.set(y, x, out.amplitudes()[flat]);
        }
    }
    Ok(m)
}

/// Protocol-simulated Toffoli against the ideal gate.
pub fn verify_toffoli_simulation(engine: &Engine, tolerance: f64) -> Result<Verification> {
    let gate = GateSpec::new(GateKind::Toffoli, vec![0, 1, 2])?;
    let simulated = simulated_matrix(engine, 3, &[gate], 2)?;
    Ok(Verification::new(
        "simulated toffoli = toffoli",
        simulated.phase_aligned_diff(&QubitMatrix::toffoli(3, 0, 1, 2)),
        tolerance,
    ))
}
