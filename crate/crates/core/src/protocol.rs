//! The non-local C-Sign gate and the circuits built from it.
//!
//! A C-Sign between `control` and `target` runs five sequential operations:
//!
//! 1. `|0> -> |g>` on both atoms (Ωt = π/2, φ = 3π/2)
//! 2. `|1> -> |e>` on the control (Ωt = π/2, φ = 3π/2)
//! 3. cavity interaction of the pair for t = π/η
//! 4. step 2 with φ = π/2
//! 5. step 1 with φ = π/2
//!
//! Only `|e_c, 1_t>` picks up a net sign, so the pair sees diag(1, 1, 1, -1).
//! Atoms outside the pair stay in their qubit levels and never couple.

use alloc::{format, string::String, vec, vec::Vec};
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::dynamics::{apply_pulse, bell_closed_form, evolve, IntegratorConfig};
use crate::gates::{toffoli_sequence, GateKind, GateSpec};
use crate::hilbert::{basis_state, AtomLevel, Operator, Shape, SystemState};
use crate::model::{
    decay_augmented_hamiltonian, effective_hamiltonian, full_hamiltonian, FrameChoice, PhysicalParams,
    Pulse, Transition, PHASE_BACKWARD, PHASE_FORWARD,
};
use crate::{Error, Result};

/// Population tolerated outside the qubit subspace (or outside vacuum) in a
/// protocol input.
pub const INPUT_SUBSPACE_TOL: f64 = 1e-9;

/// Which Hamiltonian drives the cavity-interaction step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EngineMode {
    /// Adiabatically eliminated exchange Hamiltonian.
    #[default]
    Effective,
    /// Dispersive coupling to the truncated cavity mode.
    Full,
    /// Dispersive coupling plus no-jump atomic and cavity decay.
    FullWithDecay,
}

impl EngineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineMode::Effective => "effective",
            EngineMode::Full => "full",
            EngineMode::FullWithDecay => "decay",
        }
    }
}

impl fmt::Display for EngineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CsignStep {
    RaiseBoth,
    ExciteControl,
    CavityInteraction,
    DeexciteControl,
    LowerBoth,
}

impl CsignStep {
    pub const ALL: [CsignStep; 5] = [
        CsignStep::RaiseBoth,
        CsignStep::ExciteControl,
        CsignStep::CavityInteraction,
        CsignStep::DeexciteControl,
        CsignStep::LowerBoth,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn description(self) -> &'static str {
        match self {
            CsignStep::RaiseBoth => "|0>->|g> on control and target",
            CsignStep::ExciteControl => "|1>->|e> on control",
            CsignStep::CavityInteraction => "cavity interaction for t = pi/eta",
            CsignStep::DeexciteControl => "|e>->|1> on control",
            CsignStep::LowerBoth => "|g>->|0> on control and target",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepLabel {
    Csign { step: CsignStep, control: usize, target: usize },
    Gate(GateSpec),
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepLabel::Csign { step, control, target } => {
                write!(f, "csign({control},{target}) step {}: {}", step.number(), step.description())
            }
            StepLabel::Gate(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub label: StepLabel,
    pub state: SystemState,
}

/// Raw (not phase-aligned) snapshots after every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolTrace {
    pub steps: Vec<TraceStep>,
    pub final_state: SystemState,
}

impl ProtocolTrace {
    /// Population left outside the qubit subspace at the end.
    pub fn qubit_leakage(&self) -> f64 {
        self.final_state.non_qubit_population()
    }

    pub fn cavity_vacuum_population(&self) -> f64 {
        self.final_state.vacuum_population()
    }
}

/// Applies a single-qubit gate on the {|0>, |1>} block of one atom.
pub fn single_qubit(state: &SystemState, gate: &GateSpec) -> Result<SystemState> {
    let matrix = gate
        .kind()
        .matrix()
        .ok_or(Error::OperandMismatch { expected: 1, got: gate.operands().len() })?;
    let atom = gate.operands()[0];
    let shape = state.shape();
    shape.check_atom(atom)?;
    let mut amps = state.amplitudes().to_vec();
    for flat in 0..shape.dim() {
        if shape.level_of(flat, atom) != AtomLevel::Zero {
            continue;
        }
        let one = shape.with_level(flat, atom, AtomLevel::One);
        let (a0, a1) = (amps[flat], amps[one]);
        amps[flat] = matrix[0][0] * a0 + matrix[0][1] * a1;
        amps[one] = matrix[1][0] * a0 + matrix[1][1] * a1;
    }
    SystemState::from_amplitudes(shape, amps)
}

/// Gate executor for one physical configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Engine {
    params: PhysicalParams,
    mode: EngineMode,
    integrator: IntegratorConfig,
    pulse_rabi: f64,
}

impl Engine {
    pub fn new(params: PhysicalParams, mode: EngineMode) -> Result<Self> {
        params.validate()?;
        Ok(Engine {
            integrator: IntegratorConfig::for_params(&params),
            pulse_rabi: params.omega_c,
            params,
            mode,
        })
    }

    pub fn with_integrator(mut self, integrator: IntegratorConfig) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn mode(&self) -> EngineMode {
        self.mode
    }

    pub fn integrator(&self) -> &IntegratorConfig {
        &self.integrator
    }

    /// Hamiltonian of the cavity-interaction step with `pair` coupled.
    pub fn interaction_hamiltonian(&self, shape: Shape, pair: (usize, usize)) -> Result<Operator> {
        if pair.0 == pair.1 {
            return Err(Error::InvalidPair { index: pair.0 });
        }
        match self.mode {
            EngineMode::Effective => effective_hamiltonian(&self.params, pair, shape),
            EngineMode::Full => full_hamiltonian(&self.params, &[pair.0, pair.1], FrameChoice::RotatedFrame, shape),
            EngineMode::FullWithDecay => {
                let base = full_hamiltonian(&self.params, &[pair.0, pair.1], FrameChoice::RotatedFrame, shape)?;
                decay_augmented_hamiltonian(&base, &self.params)
            }
        }
    }

    /// Lets `pair` interact with the cavity for time `t`.
    pub fn interact(&self, state: &SystemState, pair: (usize, usize), t: f64) -> Result<SystemState> {
        let h = self.interaction_hamiltonian(state.shape(), pair)?;
        evolve(state, &h, t, &self.integrator)
    }

    fn pulse(&self, atoms: &[usize], transition: Transition, phase: f64) -> Result<Pulse> {
        Pulse::half_cycle(atoms, transition, self.pulse_rabi, phase)
    }

    fn check_input(&self, state: &SystemState) -> Result<()> {
        let photons = 1.0 - state.vacuum_population() / state.norm_sqr().max(f64::MIN_POSITIVE);
        if photons > INPUT_SUBSPACE_TOL {
            return Err(Error::Precondition(format!("cavity not in vacuum (photon population {photons:e})")));
        }
        let outside = state.non_qubit_population();
        if outside > INPUT_SUBSPACE_TOL {
            return Err(Error::InvalidInput(format!(
                "population {outside:e} outside the qubit levels {{|0>, |1>}}"
            )));
        }
        Ok(())
    }

    fn check_pair(&self, shape: Shape, a: usize, b: usize) -> Result<()> {
        shape.check_atom(a)?;
        shape.check_atom(b)?;
        if a == b {
            return Err(Error::InvalidPair { index: a });
        }
        Ok(())
    }

    fn csign_steps(&self, state: &SystemState, control: usize, target: usize, steps: &mut Vec<TraceStep>) -> Result<SystemState> {
        self.check_pair(state.shape(), control, target)?;
        let raise = self.pulse(&[control, target], Transition::ZERO_G, PHASE_FORWARD)?;
        let excite = self.pulse(&[control], Transition::ONE_E, PHASE_FORWARD)?;
        let deexcite = self.pulse(&[control], Transition::ONE_E, PHASE_BACKWARD)?;
        let lower = self.pulse(&[control, target], Transition::ZERO_G, PHASE_BACKWARD)?;

        let mut psi = state.clone();
        for step in CsignStep::ALL {
            psi = match step {
                CsignStep::RaiseBoth => apply_pulse(&psi, &raise, &self.integrator)?,
                CsignStep::ExciteControl => apply_pulse(&psi, &excite, &self.integrator)?,
                CsignStep::CavityInteraction => self.interact(&psi, (control, target), self.params.gate_time())?,
                CsignStep::DeexciteControl => apply_pulse(&psi, &deexcite, &self.integrator)?,
                CsignStep::LowerBoth => apply_pulse(&psi, &lower, &self.integrator)?,
            };
            steps.push(TraceStep { label: StepLabel::Csign { step, control, target }, state: psi.clone() });
        }
        Ok(psi)
    }

    fn apply(&self, state: SystemState, gate: &GateSpec, steps: &mut Vec<TraceStep>) -> Result<SystemState> {
        let ops = gate.operands();
        match gate.kind() {
            GateKind::CSign => self.csign_steps(&state, ops[0], ops[1], steps),
            GateKind::CNot => {
                let h = GateSpec::new(GateKind::Hadamard, vec![ops[1]])?;
                let psi = self.apply(state, &h, steps)?;
                let psi = self.csign_steps(&psi, ops[0], ops[1], steps)?;
                self.apply(psi, &h, steps)
            }
            GateKind::Toffoli => toffoli_sequence(ops[0], ops[1], ops[2])
                .iter()
                .try_fold(state, |psi, g| self.apply(psi, g, steps)),
            _ => {
                let psi = single_qubit(&state, gate)?;
                steps.push(TraceStep { label: StepLabel::Gate(gate.clone()), state: psi.clone() });
                Ok(psi)
            }
        }
    }

    /// Executes a gate sequence. The input must lie in the qubit subspace with
    /// the cavity in vacuum; leakage produced along the way is carried, not
    /// projected out.
    pub fn run(&self, state: &SystemState, gates: &[GateSpec]) -> Result<ProtocolTrace> {
        self.check_input(state)?;
        for gate in gates {
            gate.operands().iter().try_for_each(|&a| state.shape().check_atom(a))?;
        }
        let mut steps = Vec::new();
        let final_state = gates
            .iter()
            .try_fold(state.clone(), |psi, g| self.apply(psi, g, &mut steps))?;
        Ok(ProtocolTrace { steps, final_state })
    }

    pub fn csign(&self, state: &SystemState, control: usize, target: usize) -> Result<ProtocolTrace> {
        self.check_pair(state.shape(), control, target)?;
        self.run(state, &[GateSpec::new(GateKind::CSign, vec![control, target])?])
    }

    /// H(target) · C-Sign · H(target).
    pub fn cnot(&self, state: &SystemState, control: usize, target: usize) -> Result<ProtocolTrace> {
        self.check_pair(state.shape(), control, target)?;
        self.run(state, &[GateSpec::new(GateKind::CNot, vec![control, target])?])
    }

    pub fn toffoli(&self, state: &SystemState, c1: usize, c2: usize, target: usize) -> Result<ProtocolTrace> {
        self.run(state, &[GateSpec::new(GateKind::Toffoli, vec![c1, c2, target])?])
    }

    /// Cavity interaction of |e_i g_j> for ηt = π/4.
    pub fn bell_prepare(&self, state: &SystemState, i: usize, j: usize) -> Result<SystemState> {
        self.check_pair(state.shape(), i, j)?;
        let shape = state.shape();
        let prepared: f64 = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(f, _)| {
                shape.photons_of(*f) == 0
                    && shape.level_of(*f, i) == AtomLevel::E
                    && shape.level_of(*f, j) == AtomLevel::G
                    && (0..shape.n_atoms).filter(|&k| k != i && k != j).all(|k| shape.level_of(*f, k).is_qubit())
            })
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if (state.norm_sqr() - prepared) > INPUT_SUBSPACE_TOL {
            return Err(Error::Precondition(format!("state is not |e_{i} g_{j}> with the cavity in vacuum")));
        }
        self.interact(state, (i, j), PI / (4.0 * self.params.eta()))
    }

    /// Runs the C-Sign on the four basis inputs of a two-atom register.
    pub fn truth_table(&self, n_max: usize) -> Result<TruthTable> {
        let mut runs = Vec::with_capacity(4);
        for (c, t) in [(false, false), (false, true), (true, false), (true, true)] {
            let input = basis_state(&[AtomLevel::qubit(c), AtomLevel::qubit(t)], 0, n_max)?;
            let trace = self.csign(&input, 0, 1)?;
            let expected = table_one_row(c, t)
                .iter()
                .map(|(levels, sign)| Ok(basis_state(levels, 0, n_max)?.scaled(C64::new(*sign, 0.0))))
                .collect::<Result<Vec<_>>>()?;
            runs.push((input, [c, t], trace, expected));
        }

        // one phase for the whole table; per-row alignment would hide the sign
        let total: C64 = runs
            .iter()
            .map(|(_, _, trace, expected)| {
                crate::hilbert::partial_overlap(&trace.final_state, &expected[4]).unwrap_or(C64::zero())
            })
            .sum();
        if !(total.norm() > 0.0) {
            return Err(Error::UndefinedPhase);
        }
        let unphase = total.conj() / total.norm();

        let rows = runs
            .into_iter()
            .map(|(input, bits, trace, expected)| {
                let snapshots: Vec<SystemState> = trace.steps.iter().map(|s| s.state.scaled(unphase)).collect();
                let mut step_errors = [0.0; 5];
                for (k, (got, want)) in snapshots.iter().zip(&expected).enumerate() {
                    step_errors[k] = got.max_abs_diff(want)?;
                }
                let output = trace.final_state.scaled(unphase);
                let overlap = crate::hilbert::partial_overlap(&output, &input)?;
                Ok(TruthRow {
                    input: bits,
                    snapshots,
                    expected,
                    step_errors,
                    sign: if overlap.re < 0.0 { -1 } else { 1 },
                    qubit_leakage: output.non_qubit_population(),
                    output,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruthTable { mode: self.mode, global_phase: libm::atan2(total.im, total.re), rows })
    }
}

/// Step-by-step entries of the C-Sign truth table for input |c, t>.
pub fn table_one_row(c: bool, t: bool) -> [([AtomLevel; 2], f64); 5] {
    use AtomLevel::*;
    match (c, t) {
        (false, false) => [([G, G], 1.0), ([G, G], 1.0), ([G, G], 1.0), ([G, G], 1.0), ([Zero, Zero], 1.0)],
        (false, true) => [([G, One], 1.0), ([G, One], 1.0), ([G, One], 1.0), ([G, One], 1.0), ([Zero, One], 1.0)],
        (true, false) => [([One, G], 1.0), ([E, G], 1.0), ([E, G], 1.0), ([One, G], 1.0), ([One, Zero], 1.0)],
        (true, true) => [([One, One], 1.0), ([E, One], 1.0), ([E, One], -1.0), ([One, One], -1.0), ([One, One], -1.0)],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthRow {
    /// (control, target) input bits.
    pub input: [bool; 2],
    /// Phase-aligned snapshots after steps 1-5.
    pub snapshots: Vec<SystemState>,
    pub expected: Vec<SystemState>,
    pub step_errors: [f64; 5],
    pub output: SystemState,
    /// Sign of the output relative to the input.
    pub sign: i8,
    pub qubit_leakage: f64,
}

impl TruthRow {
    pub fn max_error(&self) -> f64 {
        self.step_errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn label(&self) -> String {
        format!("|{}_c,{}_t>", self.input[0] as u8, self.input[1] as u8)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthTable {
    pub mode: EngineMode,
    /// Global phase removed from every snapshot.
    pub global_phase: f64,
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(TruthRow::max_error).fold(0.0, f64::max)
    }

    pub fn signs(&self) -> Vec<i8> {
        self.rows.iter().map(|r| r.sign).collect()
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.signs() == [1, 1, 1, -1] && self.max_error() <= tol
    }
}

/// Ideal result of [`Engine::bell_prepare`] for the given input.
pub fn bell_target(input: &SystemState, i: usize, j: usize) -> Result<SystemState> {
    let shape = input.shape();
    shape.check_atom(i)?;
    shape.check_atom(j)?;
    let [stay, swap] = bell_closed_form();
    let mut amps = vec![C64::zero(); shape.dim()];
    for (flat, a) in input.amplitudes().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if shape.level_of(flat, i) != AtomLevel::E || shape.level_of(flat, j) != AtomLevel::G {
            return Err(Error::Precondition(format!("input is not |e_{i} g_{j}>")));
        }
        let swapped = shape.with_level(shape.with_level(flat, i, AtomLevel::G), j, AtomLevel::E);
        amps[flat] += a * stay;
        amps[swapped] += a * swap;
    }
    SystemState::from_amplitudes(shape, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{global_phase_align, partial_overlap};
    use AtomLevel::*;

    fn engine() -> Engine {
        Engine::new(PhysicalParams::lossless(10.0), EngineMode::Effective).unwrap()
    }

    #[test]
    fn csign_signs() {
        let e = engine();
        let out = e.csign(&basis_state(&[One, One], 0, 2).unwrap(), 0, 1).unwrap();
        assert_eq!(out.steps.len(), 5);
        let want = basis_state(&[One, One], 0, 2).unwrap().scaled(C64::new(-1.0, 0.0));
        assert!(out.final_state.max_abs_diff(&want).unwrap() < 1e-8);

        let psi = basis_state(&[Zero, One], 0, 2).unwrap();
        let out = e.csign(&psi, 0, 1).unwrap();
        assert!(out.final_state.max_abs_diff(&psi).unwrap() < 1e-8);
    }

    #[test]
    fn csign_preconditions() {
        let e = engine();
        let psi = basis_state(&[One, One], 0, 2).unwrap();
        assert_eq!(e.csign(&psi, 1, 1).unwrap_err(), Error::InvalidPair { index: 1 });
        assert!(matches!(e.csign(&psi, 0, 2), Err(Error::InvalidAtom { .. })));
        let excited = basis_state(&[E, One], 0, 2).unwrap();
        assert!(matches!(e.csign(&excited, 0, 1), Err(Error::InvalidInput(_))));
        let photon = basis_state(&[One, One], 1, 2).unwrap();
        assert!(matches!(e.csign(&photon, 0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn single_qubit_gates() {
        let zero = basis_state(&[Zero], 0, 0).unwrap();
        let h = GateSpec::new(GateKind::Hadamard, vec![0]).unwrap();
        let plus = single_qubit(&zero, &h).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((plus.amplitudes()[0] - r).norm() < 1e-15 && (plus.amplitudes()[1] - r).norm() < 1e-15);
        assert!(single_qubit(&plus, &h).unwrap().max_abs_diff(&zero).unwrap() < 1e-12);

        let one = basis_state(&[One], 0, 0).unwrap();
        let s = GateSpec::new(GateKind::S, vec![0]).unwrap();
        assert!((single_qubit(&one, &s).unwrap().amplitudes()[1] - C64::i()).norm() < 1e-15);

        // g and e are untouched
        let g = basis_state(&[G], 0, 0).unwrap();
        assert_eq!(single_qubit(&g, &h).unwrap(), g);

        let cz = GateSpec::new(GateKind::CSign, vec![0, 1]).unwrap();
        assert_eq!(single_qubit(&one, &cz).unwrap_err(), Error::OperandMismatch { expected: 1, got: 2 });
    }

    #[test]
    fn truth_table_effective() {
        let table = engine().truth_table(2).unwrap();
        assert_eq!(table.signs(), vec![1, 1, 1, -1]);
        assert!(table.max_error() < 1e-8, "{}", table.max_error());
        // |1_c 0_t> after step 2 is |e_c g_t>
        let row = &table.rows[2];
        let eg = basis_state(&[E, G], 0, 2).unwrap();
        assert!(row.snapshots[1].max_abs_diff(&eg).unwrap() < 1e-8);
        let row = &table.rows[3];
        let minus_e1 = basis_state(&[E, One], 0, 2).unwrap().scaled(C64::new(-1.0, 0.0));
        assert!(row.snapshots[2].max_abs_diff(&minus_e1).unwrap() < 1e-8);
    }

    #[test]
    fn cnot_truth_table() {
        let e = engine();
        for (c, t) in [(false, false), (false, true), (true, false), (true, true)] {
            let psi = basis_state(&[AtomLevel::qubit(c), AtomLevel::qubit(t)], 0, 2).unwrap();
            let out = e.cnot(&psi, 0, 1).unwrap().final_state;
            let want = basis_state(&[AtomLevel::qubit(c), AtomLevel::qubit(t ^ c)], 0, 2).unwrap();
            assert!(partial_overlap(&out, &want).unwrap().norm() > 1.0 - 1e-9);
        }
    }

    #[test]
    fn bell_from_excited_pair() {
        let e = engine();
        let eg = basis_state(&[E, G], 0, 2).unwrap();
        let out = e.bell_prepare(&eg, 0, 1).unwrap();
        let target = bell_target(&eg, 0, 1).unwrap();
        assert!(partial_overlap(&out, &target).unwrap().norm() >= 1.0 - 1e-9);
        assert!(matches!(e.bell_prepare(&basis_state(&[G, E], 0, 2).unwrap(), 0, 1), Err(Error::Precondition(_))));
        assert_eq!(e.interact(&eg, (0, 1), 0.0).unwrap(), eg);
    }

    #[test]
    fn csign_is_symmetric_and_involutive() {
        let e = engine();
        for (c, t) in [(false, false), (false, true), (true, false), (true, true)] {
            let psi = basis_state(&[AtomLevel::qubit(c), AtomLevel::qubit(t)], 0, 2).unwrap();
            let a = e.csign(&psi, 0, 1).unwrap().final_state;
            let b = e.csign(&psi, 1, 0).unwrap().final_state;
            assert!(a.max_abs_diff(&b).unwrap() < 1e-8);
            let cs = GateSpec::new(GateKind::CSign, vec![0, 1]).unwrap();
            let twice = e.run(&psi, &[cs.clone(), cs]).unwrap();
            assert!(twice.final_state.max_abs_diff(&psi).unwrap() < 1e-8);
            assert!(global_phase_align(&twice.final_state, &psi).is_ok());
        }
    }
}
