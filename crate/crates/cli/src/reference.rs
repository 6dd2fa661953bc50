//! Published gate fidelities embedded for offline comparison.

use serde::Deserialize;

/// Data file shipped with the core crate.
pub const FIDELITY_REFERENCE_CSV: &str = include_str!("../../core/data/fidelity_reference.csv");
/// Detuning at which the reference table was computed.
pub const REFERENCE_DELTA: f64 = 10.0;
pub const ANALYTIC_TOL: f64 = 1e-5;
pub const NUMERIC_TOL: f64 = 1e-3;
/// Quoted fidelity for the experimental cavity, with its tolerance.
pub const EXPERIMENT_TARGET: f64 = 0.93;
pub const EXPERIMENT_TOL: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub struct ReferenceRow {
    pub gamma: f64,
    pub kappa: f64,
    pub f_analytic: f64,
    pub f_numeric: f64,
}

pub fn fidelity_reference() -> Vec<ReferenceRow> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(FIDELITY_REFERENCE_CSV.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("embedded reference table is well-formed")
}
