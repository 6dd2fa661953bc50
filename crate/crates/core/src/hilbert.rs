//! Composite Hilbert space of N four-level atoms and one truncated cavity mode.
//!
//! Flat basis index = `photons + (n_max + 1) * Σ_k level_k * 4^k`: the cavity
//! index is innermost and atom 0 is the least significant atomic digit. This
//! ordering is part of the serialized state format and must not change.

use alloc::{format, vec, vec::Vec};
use core::fmt;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::{Error, Result};

/// Internal level of one atom. `Zero`/`One` hold the qubit and never couple to
/// the cavity; `G`/`E` are the cavity-coupled pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLevel {
    Zero = 0,
    One = 1,
    G = 2,
    E = 3,
}

impl AtomLevel {
    pub const ALL: [AtomLevel; 4] = [AtomLevel::Zero, AtomLevel::One, AtomLevel::G, AtomLevel::E];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Qubit value for `Zero`/`One`.
    pub fn qubit(bit: bool) -> Self {
        if bit { AtomLevel::One } else { AtomLevel::Zero }
    }

    pub fn is_qubit(self) -> bool {
        matches!(self, AtomLevel::Zero | AtomLevel::One)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            AtomLevel::Zero => "0",
            AtomLevel::One => "1",
            AtomLevel::G => "g",
            AtomLevel::E => "e",
        }
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Dimensions of the composite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub n_atoms: usize,
    pub n_max: usize,
}

/// Keeps 4^N (n_max+1) comfortably inside memory for dense operators.
const MAX_ATOMS: usize = 8;

impl Shape {
    pub fn new(n_atoms: usize, n_max: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::InvalidShape("at least one atom is required".into()));
        }
        if n_atoms > MAX_ATOMS {
            return Err(Error::InvalidShape(format!(
                "{n_atoms} atoms exceeds the supported maximum of {MAX_ATOMS}"
            )));
        }
        Ok(Shape { n_atoms, n_max })
    }

    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        (1usize << (2 * self.n_atoms)) * self.fock_dim()
    }

    /// Photon number of a flat index.
    #[inline]
    pub fn photons_of(&self, flat: usize) -> usize {
        flat % self.fock_dim()
    }

    /// Level of `atom` in a flat index.
    #[inline]
    pub fn level_of(&self, flat: usize, atom: usize) -> AtomLevel {
        let digit = ((flat / self.fock_dim()) >> (2 * atom)) & 3;
        AtomLevel::ALL[digit]
    }

    /// Flat index with `atom` moved to `level`, everything else unchanged.
    #[inline]
    pub fn with_level(&self, flat: usize, atom: usize, level: AtomLevel) -> usize {
        let stride = self.fock_dim() << (2 * atom);
        let current = self.level_of(flat, atom).index();
        flat - current * stride + level.index() * stride
    }

    /// Flat index with the photon number replaced.
    #[inline]
    pub fn with_photons(&self, flat: usize, photons: usize) -> usize {
        flat - self.photons_of(flat) + photons
    }

    pub fn check_atom(&self, index: usize) -> Result<()> {
        if index < self.n_atoms {
            Ok(())
        } else {
            Err(Error::InvalidAtom { index, n_atoms: self.n_atoms })
        }
    }
}

/// Structured label of one basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub atom_levels: Vec<AtomLevel>,
    pub photon_number: usize,
}

impl BasisIndex {
    pub fn new(atom_levels: Vec<AtomLevel>, photon_number: usize) -> Self {
        BasisIndex { atom_levels, photon_number }
    }

    pub fn flatten(&self, n_max: usize) -> Result<usize> {
        if self.atom_levels.is_empty() {
            return Err(Error::InvalidShape("empty level list".into()));
        }
        if self.photon_number > n_max {
            return Err(Error::Truncation { photons: self.photon_number, n_max });
        }
        let shape = Shape::new(self.atom_levels.len(), n_max)?;
        let atoms = self
            .atom_levels
            .iter()
            .rev()
            .fold(0usize, |acc, l| acc * 4 + l.index());
        Ok(self.photon_number + shape.fock_dim() * atoms)
    }

    pub fn unflatten(flat: usize, shape: Shape) -> Result<Self> {
        if flat >= shape.dim() {
            return Err(Error::InvalidShape(format!(
                "flat index {flat} out of range for dimension {}",
                shape.dim()
            )));
        }
        let atom_levels = (0..shape.n_atoms).map(|k| shape.level_of(flat, k)).collect();
        Ok(BasisIndex { atom_levels, photon_number: shape.photons_of(flat) })
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for level in &self.atom_levels {
            write!(f, "{level}")?;
        }
        write!(f, ";{}>", self.photon_number)
    }
}

/// Pure state of the atoms and the cavity.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    shape: Shape,
    amplitudes: Vec<C64>,
}

impl SystemState {
    pub fn zero(shape: Shape) -> Self {
        SystemState { shape, amplitudes: vec![C64::zero(); shape.dim()] }
    }

    pub fn from_amplitudes(shape: Shape, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != shape.dim() {
            return Err(Error::InvalidShape(format!(
                "{} amplitudes supplied, {} atoms with n_max = {} need {}",
                amplitudes.len(),
                shape.n_atoms,
                shape.n_max,
                shape.dim()
            )));
        }
        Ok(SystemState { shape, amplitudes })
    }

    /// Product of single-atom states (amplitudes indexed by [`AtomLevel`])
    /// with the cavity in Fock state `photons`.
    pub fn product(atoms: &[[C64; 4]], photons: usize, n_max: usize) -> Result<Self> {
        if photons > n_max {
            return Err(Error::Truncation { photons, n_max });
        }
        let shape = Shape::new(atoms.len(), n_max)?;
        let mut state = SystemState::zero(shape);
        for (flat, amp) in state.amplitudes.iter_mut().enumerate() {
            if shape.photons_of(flat) != photons {
                continue;
            }
            *amp = (0..shape.n_atoms)
                .map(|k| atoms[k][shape.level_of(flat, k).index()])
                .product();
        }
        Ok(state)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n_atoms(&self) -> usize {
        self.shape.n_atoms
    }

    pub fn n_max(&self) -> usize {
        self.shape.n_max
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn amplitude(&self, index: &BasisIndex) -> Result<C64> {
        self.check_levels(index)?;
        Ok(self.amplitudes[index.flatten(self.shape.n_max)?])
    }

    fn check_levels(&self, index: &BasisIndex) -> Result<()> {
        if index.atom_levels.len() != self.shape.n_atoms {
            return Err(Error::InvalidShape(format!(
                "basis label has {} atoms, state has {}",
                index.atom_levels.len(),
                self.shape.n_atoms
            )));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        SystemState {
            shape: self.shape,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Population in the highest retained Fock level.
    pub fn top_fock_population(&self) -> f64 {
        let top = self.shape.n_max;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.shape.photons_of(*i) == top)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Population with the cavity in vacuum.
    pub fn vacuum_population(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.shape.photons_of(*i) == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Population outside the qubit subspace: any atom in `G`/`E` or any photon.
    pub fn non_qubit_population(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.is_qubit_basis(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn is_qubit_basis(&self, flat: usize) -> bool {
        self.shape.photons_of(flat) == 0
            && (0..self.shape.n_atoms).all(|k| self.shape.level_of(flat, k).is_qubit())
    }

    /// Largest per-amplitude modulus difference.
    pub fn max_abs_diff(&self, other: &SystemState) -> Result<f64> {
        check_same_shape(self.shape, other.shape)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Reduced density matrix of one atom restricted to its {|0>, |1>} block.
    pub fn reduced_qubit_density(&self, atom: usize) -> Result<[[C64; 2]; 2]> {
        self.shape.check_atom(atom)?;
        let mut rho = [[C64::zero(); 2]; 2];
        for (flat, amp) in self.amplitudes.iter().enumerate() {
            if self.shape.level_of(flat, atom) != AtomLevel::Zero {
                continue;
            }
            let one = self.shape.with_level(flat, atom, AtomLevel::One);
            let pair = [*amp, self.amplitudes[one]];
            for r in 0..2 {
                for c in 0..2 {
                    rho[r][c] += pair[r] * pair[c].conj();
                }
            }
        }
        Ok(rho)
    }

    /// Raw mutable access for integrators inside the crate.
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }
}

/// Trace distance between two 2x2 Hermitian matrices.
pub fn trace_distance_2x2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let p = (a[0][0] - b[0][0]).re;
    let r = (a[1][1] - b[1][1]).re;
    let q = a[0][1] - b[0][1];
    let mean = 0.5 * (p + r);
    let radius = libm::sqrt(0.25 * (p - r) * (p - r) + q.norm_sqr());
    0.5 * (libm::fabs(mean + radius) + libm::fabs(mean - radius))
}

fn check_same_shape(a: Shape, b: Shape) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::InvalidShape(format!(
            "shape mismatch: ({}, {}) vs ({}, {})",
            a.n_atoms, a.n_max, b.n_atoms, b.n_max
        )))
    }
}

/// Unit-norm basis vector.
pub fn basis_state(levels: &[AtomLevel], photons: usize, n_max: usize) -> Result<SystemState> {
    let index = BasisIndex::new(levels.to_vec(), photons);
    let flat = index.flatten(n_max)?;
    let mut state = SystemState::zero(Shape::new(levels.len(), n_max)?);
    state.amplitudes[flat] = C64::new(1.0, 0.0);
    Ok(state)
}

/// `<target|state>`.
pub fn partial_overlap(state: &SystemState, target: &SystemState) -> Result<C64> {
    check_same_shape(state.shape, target.shape)?;
    Ok(target
        .amplitudes
        .iter()
        .zip(&state.amplitudes)
        .map(|(t, s)| t.conj() * s)
        .sum())
}

/// Overlaps below this modulus have no meaningful phase.
const PHASE_FLOOR: f64 = 1e-300;

/// Removes the global phase of `state` relative to `reference`, leaving a real
/// non-negative overlap.
pub fn global_phase_align(state: &SystemState, reference: &SystemState) -> Result<SystemState> {
    let overlap = partial_overlap(state, reference)?;
    let modulus = overlap.norm();
    if !(modulus > PHASE_FLOOR) {
        return Err(Error::UndefinedPhase);
    }
    Ok(state.scaled(overlap.conj() / modulus))
}

/// Dense square complex matrix over the basis of a [`Shape`], row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    shape: Shape,
    data: Vec<C64>,
    hermitian: bool,
}

impl Operator {
    pub fn zero(shape: Shape) -> Self {
        let dim = shape.dim();
        Operator { shape, data: vec![C64::zero(); dim * dim], hermitian: true }
    }

    pub fn from_dense(shape: Shape, data: Vec<C64>, hermitian: bool) -> Result<Self> {
        let dim = shape.dim();
        if data.len() != dim * dim {
            return Err(Error::InvalidShape(format!(
                "operator has {} entries, expected {}",
                data.len(),
                dim * dim
            )));
        }
        Ok(Operator { shape, data, hermitian })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// Whether the constructor produced a Hermitian operator.
    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    pub(crate) fn set_hermitian(&mut self, hermitian: bool) {
        self.hermitian = hermitian;
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    #[inline]
    pub(crate) fn add_at(&mut self, row: usize, col: usize, value: C64) {
        let dim = self.dim();
        self.data[row * dim + col] += value;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Matrix element `<bra|H|ket>` between labelled basis states.
    pub fn element(&self, bra: &BasisIndex, ket: &BasisIndex) -> Result<C64> {
        let n_max = self.shape.n_max;
        for label in [bra, ket] {
            if label.atom_levels.len() != self.shape.n_atoms {
                return Err(Error::InvalidShape(format!(
                    "basis label has {} atoms, operator acts on {}",
                    label.atom_levels.len(),
                    self.shape.n_atoms
                )));
            }
        }
        Ok(self.get(bra.flatten(n_max)?, ket.flatten(n_max)?))
    }

    /// Largest element of |M - M†|.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Gershgorin bound (max absolute row sum) on the spectral radius.
    pub fn spectral_bound(&self) -> f64 {
        self.data
            .chunks(self.dim())
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn apply(&self, state: &SystemState) -> Result<SystemState> {
        check_same_shape(self.shape, state.shape)?;
        let amplitudes = self
            .data
            .chunks(self.dim())
            .map(|row| row.iter().zip(&state.amplitudes).map(|(h, a)| h * a).sum())
            .collect();
        Ok(SystemState { shape: self.shape, amplitudes })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_same_shape(self.shape, other.shape)?;
        Ok(Operator {
            shape: self.shape,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        check_same_shape(self.shape, other.shape)?;
        let dim = self.dim();
        let mut data = vec![C64::zero(); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.get(r, k);
                let b = other.get(r, k);
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.get(k, c) - b * self.get(k, c);
                }
            }
        }
        Ok(Operator { shape: self.shape, data, hermitian: false })
    }

    /// Diagonal operator built from a function of the basis index.
    pub fn diagonal(shape: Shape, f: impl Fn(usize) -> C64) -> Self {
        let mut op = Operator::zero(shape);
        for i in 0..shape.dim() {
            op.add_at(i, i, f(i));
        }
        op.hermitian = (0..shape.dim()).all(|i| op.get(i, i).im == 0.0);
        op
    }

    /// Square submatrix on the given basis indices.
    pub(crate) fn restrict(&self, indices: &[usize]) -> Vec<C64> {
        let mut out = Vec::with_capacity(indices.len() * indices.len());
        for &r in indices {
            for &c in indices {
                out.push(self.get(r, c));
            }
        }
        out
    }

    /// Basis indices reachable from `seeds` through nonzero matrix elements.
    pub(crate) fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let dim = self.dim();
        let mut seen = vec![false; dim];
        let mut stack: Vec<usize> = Vec::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(i) = stack.pop() {
            for (j, visited) in seen.iter_mut().enumerate() {
                if !*visited && !(self.get(i, j).is_zero() && self.get(j, i).is_zero()) {
                    *visited = true;
                    stack.push(j);
                }
            }
        }
        (0..dim).filter(|&i| seen[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtomLevel::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn flatten_matches_documented_formula() {
        // photons + 3 * (G * 1 + E * 4)
        let idx = BasisIndex::new(vec![G, E], 1);
        assert_eq!(idx.flatten(2).unwrap(), 1 + 3 * (2 + 3 * 4));
    }

    #[test]
    fn flatten_is_bijective_for_small_spaces() {
        for n_atoms in 1..=3 {
            for n_max in 0..=2 {
                let shape = Shape::new(n_atoms, n_max).unwrap();
                for flat in 0..shape.dim() {
                    let idx = BasisIndex::unflatten(flat, shape).unwrap();
                    assert_eq!(idx.flatten(n_max).unwrap(), flat);
                    for (k, level) in idx.atom_levels.iter().enumerate() {
                        assert_eq!(shape.level_of(flat, k), *level);
                    }
                }
            }
        }
    }

    #[test]
    fn basis_state_examples() {
        let gg = basis_state(&[G, G], 0, 2).unwrap();
        let flat = BasisIndex::new(vec![G, G], 0).flatten(2).unwrap();
        assert_eq!(gg.amplitudes()[flat], c(1.0, 0.0));
        assert_eq!(gg.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);

        let eg = basis_state(&[E, G], 0, 2).unwrap();
        assert_eq!(eg.amplitude(&BasisIndex::new(vec![E, G], 0)).unwrap(), c(1.0, 0.0));

        let s = basis_state(&[Zero, One, Zero], 0, 1).unwrap();
        assert_eq!(s.norm(), 1.0);
    }

    #[test]
    fn basis_state_errors() {
        assert_eq!(
            basis_state(&[G], 3, 2).unwrap_err(),
            Error::Truncation { photons: 3, n_max: 2 }
        );
        assert!(matches!(basis_state(&[], 0, 2), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn basis_states_are_orthonormal() {
        for n_atoms in 1..=2 {
            let shape = Shape::new(n_atoms, 2).unwrap();
            let states: Vec<_> = (0..shape.dim())
                .map(|f| {
                    let idx = BasisIndex::unflatten(f, shape).unwrap();
                    basis_state(&idx.atom_levels, idx.photon_number, 2).unwrap()
                })
                .collect();
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert_eq!(partial_overlap(a, b).unwrap(), c(expected, 0.0));
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let eg = basis_state(&[E, G], 0, 2).unwrap();
        let ge = basis_state(&[G, E], 0, 2).unwrap();
        assert_eq!(partial_overlap(&eg, &eg).unwrap(), c(1.0, 0.0));
        assert_eq!(partial_overlap(&eg, &ge).unwrap(), c(0.0, 0.0));
        let other = basis_state(&[E, G, G], 0, 2).unwrap();
        assert!(matches!(partial_overlap(&eg, &other), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn phase_alignment_removes_global_phase() {
        let psi = SystemState::product(
            &[[c(0.6, 0.0), c(0.0, 0.8), C64::zero(), C64::zero()]; 2],
            0,
            1,
        )
        .unwrap();
        let rotated = psi.scaled(C64::from_polar(1.0, core::f64::consts::PI / 3.0));
        let aligned = global_phase_align(&rotated, &psi).unwrap();
        assert!(aligned.max_abs_diff(&psi).unwrap() < 1e-12);
        let same = global_phase_align(&psi, &psi).unwrap();
        assert!(same.max_abs_diff(&psi).unwrap() < 1e-15);
        let twice = global_phase_align(&aligned, &psi).unwrap();
        assert!(twice.max_abs_diff(&aligned).unwrap() < 1e-15);
    }

    #[test]
    fn lab_frame_phase_is_removable() {
        // exp(-i pi omega_e Delta / g^2) with omega_e = 3.7, Delta = 10, g = 1
        let eg = basis_state(&[E, G], 0, 2).unwrap();
        let phased = eg.scaled(C64::from_polar(1.0, -core::f64::consts::PI * 3.7 * 10.0));
        let aligned = global_phase_align(&phased, &eg).unwrap();
        assert!(aligned.max_abs_diff(&eg).unwrap() < 1e-12);
    }

    #[test]
    fn zero_overlap_has_no_phase() {
        let eg = basis_state(&[E, G], 0, 2).unwrap();
        let ge = basis_state(&[G, E], 0, 2).unwrap();
        assert_eq!(global_phase_align(&eg, &ge).unwrap_err(), Error::UndefinedPhase);
    }

    #[test]
    fn reduced_density_of_product_state() {
        let a = [c(0.6, 0.0), c(0.0, 0.8), C64::zero(), C64::zero()];
        let b = [c(1.0, 0.0), C64::zero(), C64::zero(), C64::zero()];
        let psi = SystemState::product(&[b, a, b], 0, 2).unwrap();
        let rho = psi.reduced_qubit_density(1).unwrap();
        assert!((rho[0][0].re - 0.36).abs() < 1e-15);
        assert!((rho[0][1] - c(0.0, -0.48)).norm() < 1e-15);
        assert!(trace_distance_2x2(&rho, &rho) < 1e-15);
        let flipped = [[rho[1][1], rho[0][1]], [rho[1][0], rho[0][0]]];
        // diagonal swap: eigenvalues of the difference are +-0.28
        assert!((trace_distance_2x2(&rho, &flipped) - 0.28).abs() < 1e-12);
    }

    #[test]
    fn with_level_and_photons_edit_one_digit() {
        let shape = Shape::new(3, 2).unwrap();
        let flat = BasisIndex::new(vec![Zero, G, E], 1).flatten(2).unwrap();
        let moved = shape.with_level(flat, 1, One);
        assert_eq!(BasisIndex::unflatten(moved, shape).unwrap(), BasisIndex::new(vec![Zero, One, E], 1));
        let lit = shape.with_photons(flat, 2);
        assert_eq!(BasisIndex::unflatten(lit, shape).unwrap(), BasisIndex::new(vec![Zero, G, E], 2));
    }
}
