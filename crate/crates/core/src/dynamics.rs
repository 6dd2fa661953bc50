//! Time evolution and closed-form reference solutions.
//!
//! [`evolve`] integrates `ψ̇ = -iHψ` with fixed-step RK4. Before stepping, the
//! basis is restricted to the block of states reachable from the support of
//! the initial state through nonzero matrix elements. The restriction is
//! exact (amplitudes outside the block stay zero) and keeps long detuned runs
//! cheap. Non-Hermitian generators are integrated the same way with no
//! renormalization.

use alloc::{vec, vec::Vec};
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::hilbert::{AtomLevel, BasisIndex, Operator, SystemState};
use crate::model::{drive_hamiltonian, PhysicalParams, Pulse};
use crate::{Error, Result};

/// Largest phase any eigenvalue may accumulate in one step, `dt * ||H||`.
pub const MAX_PHASE_PER_STEP: f64 = 0.01;
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    #[default]
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Upper bound on the step. `None` sizes the step from the operator alone.
    /// The step actually taken never exceeds `MAX_PHASE_PER_STEP / ||H||`.
    pub dt: Option<f64>,
    pub method: Method,
    /// Maximum population tolerated in the top Fock level.
    pub leakage_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: None, method: Method::Rk4, leakage_tol: DEFAULT_LEAKAGE_TOL }
    }
}

impl IntegratorConfig {
    /// dt = min(0.01/Δ, 0.01/Ωc).
    pub fn for_params(params: &PhysicalParams) -> Self {
        let scale = params.delta.max(params.omega_c);
        IntegratorConfig { dt: Some(MAX_PHASE_PER_STEP / scale), ..Self::default() }
    }

    pub fn with_dt(dt: f64) -> Self {
        IntegratorConfig { dt: Some(dt), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidIntegrator(alloc::format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.leakage_tol >= 0.0) {
            return Err(Error::InvalidIntegrator(alloc::format!(
                "leakage_tol must be >= 0, got {}",
                self.leakage_tol
            )));
        }
        Ok(())
    }

    /// Step count and step size for a run of length `t` under a generator
    /// with spectral bound `bound`.
    fn steps(&self, t: f64, bound: f64) -> (usize, f64) {
        let mut h = if bound > 0.0 { MAX_PHASE_PER_STEP / bound } else { t };
        if let Some(dt) = self.dt {
            h = h.min(dt);
        }
        let n = libm::ceil(t / h).max(1.0) as usize;
        (n, t / n as f64)
    }
}

/// One sample of the per-step diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub norm: f64,
    pub leakage: f64,
}

/// Propagates `state` under `h` for time `t`.
pub fn evolve(state: &SystemState, h: &Operator, t: f64, cfg: &IntegratorConfig) -> Result<SystemState> {
    evolve_observed(state, h, t, cfg, |_| {})
}

/// Like [`evolve`], calling `observe` at t = 0 and after every step.
pub fn evolve_observed(
    state: &SystemState,
    h: &Operator,
    t: f64,
    cfg: &IntegratorConfig,
    mut observe: impl FnMut(TraceSample),
) -> Result<SystemState> {
    cfg.validate()?;
    if h.shape() != state.shape() {
        return Err(Error::InvalidShape(alloc::format!(
            "operator acts on {:?}, state lives in {:?}",
            h.shape(),
            state.shape()
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidIntegrator(alloc::format!("duration must be >= 0, got {t}")));
    }

    let shape = state.shape();
    let support = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, _)| i);
    let block = h.closure(support);
    // without a cavity mode there is nothing to truncate
    let top: Vec<bool> = block.iter().map(|&i| shape.n_max > 0 && shape.photons_of(i) == shape.n_max).collect();
    let sub = h.restrict(&block);
    let m = block.len();
    let mut y: Vec<C64> = block.iter().map(|&i| state.amplitudes()[i]).collect();

    let sample = |y: &[C64], time: f64| -> Result<TraceSample> {
        let mut norm = 0.0;
        let mut leakage = 0.0;
        for (k, a) in y.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::NumericalInstability { t: time });
            }
            let p = a.norm_sqr();
            norm += p;
            if top[k] {
                leakage += p;
            }
        }
        if leakage > cfg.leakage_tol {
            return Err(Error::TruncationViolated { population: leakage, tol: cfg.leakage_tol, t: time });
        }
        Ok(TraceSample { t: time, norm: libm::sqrt(norm), leakage })
    };
    observe(sample(&y, 0.0)?);

    if t > 0.0 && m > 0 {
        let bound = sub
            .chunks(m)
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        if bound > 0.0 {
            let (n_steps, dt) = cfg.steps(t, bound);
            let rows = SparseRows::from_dense(&sub, m);
            let mut stepper = Rk4::new(m);
            for step in 1..=n_steps {
                stepper.step(&rows, &mut y, dt);
                observe(sample(&y, step as f64 * dt)?);
            }
        }
    }

    let mut out = SystemState::zero(shape);
    let amps = out.amplitudes_mut();
    for (k, &i) in block.iter().enumerate() {
        amps[i] = y[k];
    }
    Ok(out)
}

/// Compressed-row copy of a restricted block.
struct SparseRows {
    starts: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseRows {
    fn from_dense(dense: &[C64], m: usize) -> Self {
        let mut rows = SparseRows { starts: Vec::with_capacity(m + 1), cols: Vec::new(), vals: Vec::new() };
        rows.starts.push(0);
        for row in dense.chunks(m) {
            for (c, v) in row.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                rows.cols.push(c);
                rows.vals.push(*v);
            }
            rows.starts.push(rows.cols.len());
        }
        rows
    }
}

struct Rk4 {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4 {
    fn new(m: usize) -> Self {
        let z = vec![C64::zero(); m];
        Rk4 { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// out = -i H y
    fn deriv(h: &SparseRows, y: &[C64], out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let span = h.starts[r]..h.starts[r + 1];
            let acc: C64 = h.cols[span.clone()].iter().zip(&h.vals[span]).map(|(&c, a)| a * y[c]).sum();
            *o = C64::new(acc.im, -acc.re);
        }
    }

    fn step(&mut self, h: &SparseRows, y: &mut [C64], dt: f64) {
        let half = 0.5 * dt;
        Self::deriv(h, y, &mut self.k1);
        for ((t, a), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *t = a + k * half;
        }
        Self::deriv(h, &self.tmp, &mut self.k2);
        for ((t, a), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *t = a + k * half;
        }
        Self::deriv(h, &self.tmp, &mut self.k3);
        for ((t, a), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *t = a + k * dt;
        }
        Self::deriv(h, &self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        for (i, a) in y.iter_mut().enumerate() {
            *a += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

/// Resonant two-level solution for `H = -Ω(e^{iφ}|a><b| + h.c.)`.
pub fn rabi_closed_form(a0: C64, b0: C64, rabi: f64, phase: f64, t: f64) -> (C64, C64) {
    let (s, c) = libm::sincos(rabi * t);
    let i = C64::i();
    let a = a0 * c + i * b0 * C64::from_polar(1.0, phase) * s;
    let b = b0 * c + i * a0 * C64::from_polar(1.0, -phase) * s;
    (a, b)
}

/// Two-atom initial configurations of the effective exchange dynamics.
/// `A` stands for a level that does not couple to the cavity (the qubit |1>).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairLabel {
    GG,
    EG,
    GE,
    EE,
    GA,
    EA,
}

impl PairLabel {
    pub const ALL: [PairLabel; 6] =
        [PairLabel::GG, PairLabel::EG, PairLabel::GE, PairLabel::EE, PairLabel::GA, PairLabel::EA];

    pub fn levels(self) -> [AtomLevel; 2] {
        use AtomLevel::*;
        match self {
            PairLabel::GG => [G, G],
            PairLabel::EG => [E, G],
            PairLabel::GE => [G, E],
            PairLabel::EE => [E, E],
            PairLabel::GA => [G, One],
            PairLabel::EA => [E, One],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairLabel::GG => "gg",
            PairLabel::EG => "eg",
            PairLabel::GE => "ge",
            PairLabel::EE => "ee",
            PairLabel::GA => "ga",
            PairLabel::EA => "ea",
        }
    }
}

impl FromStr for PairLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.into()))
    }
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Amplitudes of an analytic solution on labelled two-atom, vacuum basis
/// states.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormResult {
    pub amplitudes: Vec<(BasisIndex, C64)>,
    pub valid_regime: &'static str,
}

impl ClosedFormResult {
    pub fn to_state(&self, n_max: usize) -> Result<SystemState> {
        let n_atoms = self
            .amplitudes
            .first()
            .map(|(idx, _)| idx.atom_levels.len())
            .ok_or_else(|| Error::InvalidShape("empty closed-form result".into()))?;
        let shape = crate::hilbert::Shape::new(n_atoms, n_max)?;
        let mut amps = vec![C64::zero(); shape.dim()];
        for (idx, a) in &self.amplitudes {
            amps[idx.flatten(n_max)?] += a;
        }
        SystemState::from_amplitudes(shape, amps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|(_, a)| a.norm_sqr()).sum()
    }
}

/// Evolution of each [`PairLabel`] under the effective exchange Hamiltonian.
pub fn effective_pair_closed_form(initial: PairLabel, eta: f64, t: f64) -> ClosedFormResult {
    use AtomLevel::*;
    let phase = C64::from_polar(1.0, -eta * t);
    let (s, c) = libm::sincos(eta * t);
    let ket = |l: [AtomLevel; 2]| BasisIndex::new(l.to_vec(), 0);
    let amplitudes = match initial {
        PairLabel::GG | PairLabel::GA => vec![(ket(initial.levels()), C64::new(1.0, 0.0))],
        PairLabel::EG | PairLabel::GE => {
            let other = if initial == PairLabel::EG { [G, E] } else { [E, G] };
            vec![
                (ket(initial.levels()), phase * c),
                (ket(other), -C64::i() * phase * s),
            ]
        }
        PairLabel::EE => vec![(ket([E, E]), phase * phase)],
        PairLabel::EA => vec![(ket([E, One]), phase)],
    };
    ClosedFormResult { amplitudes, valid_regime: "dispersive: Δ ≫ Ωc, first order in Ωc²/Δ" }
}

/// Entangled pair produced from |e g> at ηt = π/4.
pub fn bell_closed_form() -> [C64; 2] {
    let prefactor = C64::from_polar(FRAC_1_SQRT_2, -core::f64::consts::FRAC_PI_4);
    [prefactor, -C64::i() * prefactor]
}

/// Applies one square pulse with all other couplings off.
pub fn apply_pulse(state: &SystemState, pulse: &Pulse, cfg: &IntegratorConfig) -> Result<SystemState> {
    let h = drive_hamiltonian(pulse, state.shape())?;
    evolve(state, &h, pulse.duration(), cfg)
}
