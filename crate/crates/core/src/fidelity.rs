//! Gate fidelity under atomic decay (γ) and cavity loss (κ).
//!
//! The worst-case branch |e_c, g_t, 0> couples to |g_c, e_t, 0> and
//! |g_c, g_t, 1>; decayed population leaves this three-state manifold and
//! never returns, so no-jump amplitudes are sufficient:
//!
//! ```text
//! ȧ = -γ/2 a + iΩc c
//! ḃ = -γ/2 b + iΩc c
//! ċ = (iΔ - κ/2) c + iΩc (a + b)
//! ```
//!
//! F = |a(t)|² at t = πΔ/Ωc², either from the adiabatically eliminated closed
//! form ([`fidelity_analytic`]) or from direct integration
//! ([`fidelity_numeric`]).

use alloc::{string::String, vec::Vec};
use core::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::dynamics::{IntegratorConfig, MAX_PHASE_PER_STEP};
use crate::model::PhysicalParams;
use crate::{Error, Result};

/// Coupling rate of the reference cavity, 2π × 16 MHz (Ωc = 32π MHz).
pub const EXPERIMENT_OMEGA_C: f64 = 32.0 * PI;
/// Field decay of the reference cavity, κ = 2.8π MHz.
pub const EXPERIMENT_KAPPA: f64 = 2.8 * PI;
pub const EXPERIMENT_GAMMA: f64 = 0.001;
pub const EXPERIMENT_DELTA: f64 = 10.0;

/// Tracked amplitudes of the damped three-level model. The decayed amplitude
/// is implicit: its population is `1 - |a|² - |b|² - |c|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayModelState {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl DecayModelState {
    pub fn initial() -> Self {
        DecayModelState { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0), c: C64::new(0.0, 0.0) }
    }

    pub fn tracked_population(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr()
    }

    pub fn decayed_population(&self) -> f64 {
        1.0 - self.tracked_population()
    }

    fn derivative(&self, p: &PhysicalParams) -> Self {
        let i = C64::i();
        let g = p.omega_c;
        DecayModelState {
            a: -0.5 * p.gamma * self.a + i * g * self.c,
            b: -0.5 * p.gamma * self.b + i * g * self.c,
            c: (i * p.delta - 0.5 * p.kappa) * self.c + i * g * (self.a + self.b),
        }
    }

    fn axpy(&self, k: &Self, h: f64) -> Self {
        DecayModelState { a: self.a + k.a * h, b: self.b + k.b * h, c: self.c + k.c * h }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub gamma: f64,
    pub kappa: f64,
    pub delta: f64,
    pub t_gate: f64,
    pub f_analytic: f64,
    pub f_numeric: f64,
    pub notes: Vec<String>,
}

/// Closed-form (a(t), b(t)) after eliminating the one-photon amplitude.
pub fn analytic_amplitudes(params: &PhysicalParams, t: f64) -> (C64, C64) {
    let PhysicalParams { gamma, kappa, delta, omega_c, .. } = *params;
    let i = C64::i();
    let denom = C64::new(2.0 * delta, kappa);
    let envelope = (-(t * gamma * delta) / denom).exp();
    let slow = (-i * (t * gamma * kappa) / (2.0 * denom)).exp();
    let fast = (-i * (t * (gamma * kappa + 8.0 * omega_c * omega_c)) / (2.0 * denom)).exp();
    (0.5 * envelope * (slow + fast), -0.5 * envelope * (slow - fast))
}

/// F = |a(t)|² at the gate time from the adiabatic-elimination formula.
pub fn fidelity_analytic(params: &PhysicalParams) -> f64 {
    analytic_amplitudes(params, params.gate_time()).0.norm_sqr()
}

/// Integrates the damped amplitude equations from (1, 0, 0) for time `t`,
/// reporting every state to `observe`.
pub fn integrate_decay_model(
    params: &PhysicalParams,
    t: f64,
    cfg: &IntegratorConfig,
    mut observe: impl FnMut(f64, &DecayModelState),
) -> Result<DecayModelState> {
    params.validate()?;
    cfg.validate()?;
    let bound = params.delta + 2.0 * params.omega_c + 0.5 * (params.kappa + params.gamma);
    let mut h = MAX_PHASE_PER_STEP / bound;
    if let Some(dt) = cfg.dt {
        h = h.min(dt);
    }
    let n = libm::ceil(t / h).max(1.0) as usize;
    let h = t / n as f64;

    let mut y = DecayModelState::initial();
    observe(0.0, &y);
    for step in 1..=n {
        let k1 = y.derivative(params);
        let k2 = y.axpy(&k1, 0.5 * h).derivative(params);
        let k3 = y.axpy(&k2, 0.5 * h).derivative(params);
        let k4 = y.axpy(&k3, h).derivative(params);
        y = DecayModelState {
            a: y.a + (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a) * (h / 6.0),
            b: y.b + (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b) * (h / 6.0),
            c: y.c + (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c) * (h / 6.0),
        };
        let time = step as f64 * h;
        if !y.tracked_population().is_finite() {
            return Err(Error::NumericalInstability { t: time });
        }
        observe(time, &y);
    }
    Ok(y)
}

/// F' = |a(t)|² at the gate time, with the one-photon state kept explicitly.
pub fn fidelity_numeric(params: &PhysicalParams, cfg: &IntegratorConfig) -> Result<f64> {
    Ok(integrate_decay_model(params, params.gate_time(), cfg, |_, _| {})?.a.norm_sqr())
}

pub fn fidelity_report(params: &PhysicalParams, cfg: &IntegratorConfig) -> Result<FidelityReport> {
    let f_numeric = fidelity_numeric(params, cfg)?;
    let mut notes = Vec::new();
    if !params.is_dispersive() {
        notes.push(alloc::format!(
            "delta/omega_c = {} below {}: adiabatic elimination not trusted",
            params.delta / params.omega_c,
            crate::model::DISPERSIVE_RATIO
        ));
    }
    if params.kappa >= params.omega_c {
        notes.push("kappa >= omega_c: outside the weak-loss regime".into());
    }
    Ok(FidelityReport {
        gamma: params.gamma,
        kappa: params.kappa,
        delta: params.delta,
        t_gate: params.gate_time(),
        f_analytic: fidelity_analytic(params),
        f_numeric,
        notes,
    })
}

/// One report per (γ, κ) point at fixed Δ, in input order.
pub fn fidelity_sweep(grid: &[(f64, f64)], delta: f64, cfg: &IntegratorConfig) -> Result<Vec<FidelityReport>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    grid.iter()
        .map(|&(gamma, kappa)| fidelity_report(&PhysicalParams::new(delta, kappa, gamma), cfg))
        .collect()
}

/// Parameters of the reference cavity in units of its coupling rate.
pub fn experimental_params() -> PhysicalParams {
    PhysicalParams::new(EXPERIMENT_DELTA, EXPERIMENT_KAPPA / EXPERIMENT_OMEGA_C, EXPERIMENT_GAMMA)
}

pub fn experimental_point(cfg: &IntegratorConfig) -> Result<FidelityReport> {
    fidelity_report(&experimental_params(), cfg)
}
