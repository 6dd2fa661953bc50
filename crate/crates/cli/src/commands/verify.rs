use std::f64::consts::PI;

use cavqed_core::circuits::{
    hadamard_conjugated_csign, verify_cnot_csign_equivalence, verify_swap_decomposition,
    verify_toffoli_decomposition, verify_toffoli_simulation, QubitMatrix,
};
use cavqed_core::dynamics::{
    apply_pulse, effective_pair_closed_form, evolve, rabi_closed_form, IntegratorConfig, PairLabel,
};
use cavqed_core::hilbert::{basis_state, partial_overlap, AtomLevel, Shape, SystemState};
use cavqed_core::model::{effective_hamiltonian, PhysicalParams, Pulse, Transition};
use cavqed_core::protocol::{bell_target, Engine, EngineMode};
use cavqed_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{verdict, EFFECTIVE_TOL};
use crate::commands::bell::BELL_EFFECTIVE_TOL;
use crate::config::{Format, Settings};
use crate::error::Result;
use crate::formats::{csv_string, json_string, render_table};
use crate::Report;

/// Separation required between a wrong circuit and the gate it imitates.
const NEGATIVE_CONTROL_GAP: f64 = 0.5;
const PULSE_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct Check {
    name: String,
    deviation: f64,
    /// `"<="` for an upper bound, `">="` for a required separation.
    bound: &'static str,
    limit: f64,
    passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, deviation: f64, limit: f64) -> Self {
        Check { name: name.into(), deviation, bound: "<=", limit, passed: deviation <= limit }
    }

    fn at_least(name: impl Into<String>, deviation: f64, limit: f64) -> Self {
        Check { name: name.into(), deviation, bound: ">=", limit, passed: deviation >= limit }
    }
}

#[derive(Serialize)]
struct VerifyJson {
    passed: bool,
    checks: Vec<Check>,
}

/// Effective-dynamics evolution of each labelled pair against its closed form.
/// `scale` multiplies the coupling seen by the integrator only.
fn oracle_checks(params: &PhysicalParams, scale: f64) -> Result<Vec<Check>> {
    let eta = params.eta();
    let mut simulated = *params;
    simulated.delta /= scale;
    let mut checks = Vec::new();
    for label in PairLabel::ALL {
        let input = basis_state(&label.levels(), 0, 1)?;
        let h = effective_hamiltonian(&simulated, (0, 1), input.shape())?;
        let mut worst = 0.0f64;
        for t in [PI / (4.0 * eta), PI / (2.0 * eta), PI / eta] {
            let out = evolve(&input, &h, t, &IntegratorConfig::default())?;
            let expected = effective_pair_closed_form(label, eta, t).to_state(1)?;
            worst = worst.max(out.max_abs_diff(&expected)?);
        }
        checks.push(Check::at_most(format!("exchange dynamics from |{label}>"), worst, EFFECTIVE_TOL));
    }

    let (a0, b0) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let shape = Shape::new(1, 0)?;
    let mut amps = vec![C64::new(0.0, 0.0); shape.dim()];
    amps[AtomLevel::G.index()] = a0;
    amps[AtomLevel::Zero.index()] = b0;
    let psi = SystemState::from_amplitudes(shape, amps)?;
    let (rabi, phase, t) = (0.9, 0.4, 1.7);
    let out = apply_pulse(&psi, &Pulse::new(&[0], Transition::ZERO_G, rabi * scale, phase, t)?, &IntegratorConfig::default())?;
    let (a, b) = rabi_closed_form(a0, b0, rabi, phase, t);
    let dev = (out.amplitudes()[AtomLevel::G.index()] - a)
        .norm()
        .max((out.amplitudes()[AtomLevel::Zero.index()] - b).norm());
    checks.push(Check::at_most("square pulse", dev, PULSE_TOL));
    Ok(checks)
}

pub fn verify(s: &Settings, bell: bool, perturb: Option<u64>) -> Result<Report> {
    let scale = match perturb {
        Some(seed) => 1.0 + ChaCha8Rng::seed_from_u64(seed).gen_range(1e-3..1e-2),
        None => 1.0,
    };
    let mut checks: Vec<Check> = verify_swap_decomposition()
        .into_iter()
        .chain(verify_cnot_csign_equivalence())
        .chain([verify_toffoli_decomposition()])
        .map(|v| Check::at_most(v.name, v.max_deviation, v.tolerance))
        .collect();
    checks.push(Check::at_least(
        "negative control: H on the control is not cnot",
        hadamard_conjugated_csign(0).max_abs_diff(&QubitMatrix::cnot(2, 0, 1)),
        NEGATIVE_CONTROL_GAP,
    ));
    checks.extend(oracle_checks(&s.params, scale)?);

    let engine = Engine::new(s.params, EngineMode::Effective)?;
    let table = engine.truth_table(s.n_max)?;
    let sign_ok = table.signs() == [1, 1, 1, -1];
    checks.push(Check::at_most(
        "c-sign truth table",
        if sign_ok { table.max_error() } else { f64::INFINITY },
        EFFECTIVE_TOL,
    ));
    let toffoli = verify_toffoli_simulation(&engine, EFFECTIVE_TOL)?;
    checks.push(Check::at_most(toffoli.name, toffoli.max_deviation, toffoli.tolerance));

    if bell {
        let input = basis_state(&[AtomLevel::E, AtomLevel::G], 0, s.n_max)?;
        let out = engine.bell_prepare(&input, 0, 1)?;
        let overlap = partial_overlap(&out, &bell_target(&input, 0, 1)?)?.norm();
        checks.push(Check::at_most("bell overlap deficit", 1.0 - overlap, BELL_EFFECTIVE_TOL));
    }

    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| failed.join("; "));
    let passed = failure.is_none();

    let header = ["check", "deviation", "bound", "result"];
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                format!("{:.3e}", c.deviation),
                format!("{} {:e}", c.bound, c.limit),
                verdict(c.passed).to_string(),
            ]
        })
        .collect();
    let body = match s.format {
        Format::Json => json_string(&VerifyJson { passed, checks })?,
        Format::Csv => csv_string(&header, &rows)?,
        Format::Table => format!("{}\n{}\n", render_table(&header, &rows), verdict(passed)),
    };
    Ok(Report::checked(body, failure))
}
