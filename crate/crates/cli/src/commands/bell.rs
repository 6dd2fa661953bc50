use std::f64::consts::PI;
use std::path::Path;

use cavqed_core::dynamics::evolve_observed;
use cavqed_core::hilbert::{basis_state, partial_overlap, AtomLevel};
use serde::Serialize;

use super::{engine, verdict};
use crate::config::{Format, Settings};
use crate::error::Result;
use crate::formats::{csv_string, json_string, read_state, render_table, snapshot, write_samples_csv, StateJson};
use crate::Report;

/// Allowed 1 - |<ideal|out>| with the eliminated cavity.
pub const BELL_EFFECTIVE_TOL: f64 = 1e-9;
pub const BELL_DISPERSIVE_TOL: f64 = 1e-2;

#[derive(Serialize)]
struct BellJson {
    mode: &'static str,
    delta: f64,
    t: f64,
    overlap: f64,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<StateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<StateJson>,
}

pub fn bell(s: &Settings, state: Option<&Path>, trace: Option<&Path>) -> Result<Report> {
    let engine = engine(s)?;
    let input = match state {
        Some(path) => read_state(path)?,
        None => basis_state(&[AtomLevel::E, AtomLevel::G], 0, s.n_max)?,
    };
    let target = cavqed_core::protocol::bell_target(&input, 0, 1)?;
    let out = engine.bell_prepare(&input, 0, 1)?;
    let t = PI / (4.0 * s.params.eta());
    if let Some(path) = trace {
        let h = engine.interaction_hamiltonian(input.shape(), (0, 1))?;
        let mut samples = Vec::new();
        evolve_observed(&input, &h, t, engine.integrator(), |x| samples.push(x))?;
        write_samples_csv(path, &samples)?;
    }
    let overlap = partial_overlap(&out, &target)?.norm();
    let tolerance = if engine.mode() == cavqed_core::protocol::EngineMode::Effective {
        BELL_EFFECTIVE_TOL
    } else {
        BELL_DISPERSIVE_TOL
    };
    let passed = 1.0 - overlap <= tolerance;
    let doc = BellJson {
        mode: engine.mode().as_str(),
        delta: s.params.delta,
        t,
        overlap,
        tolerance,
        passed,
        state: snapshot(&out, s.dump_states),
        target: snapshot(&target, s.dump_states),
    };
    let header = ["mode", "delta", "t", "overlap", "result"];
    let row = vec![vec![
        doc.mode.to_string(),
        format!("{}", doc.delta),
        format!("{:.6}", doc.t),
        format!("{:.12}", doc.overlap),
        verdict(passed).to_string(),
    ]];
    let body = match s.format {
        Format::Json => json_string(&doc)?,
        Format::Csv => csv_string(&header, &row)?,
        Format::Table => format!(
            "{}\nrequired 1 - overlap <= {tolerance:e}\n",
            render_table(&header, &row)
        ),
    };
    Ok(Report::checked(body, (!passed).then(|| format!("bell overlap {overlap:.12}"))))
}
