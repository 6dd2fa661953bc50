use cavqed_core::hilbert::{basis_state, global_phase_align, AtomLevel};
use serde::Serialize;

use super::{engine, mode_tolerance, verdict};
use crate::config::{Format, Settings};
use crate::error::{CliError, Result};
use crate::formats::{csv_string, json_string, render_table, TraceJson};
use crate::Report;

#[derive(Serialize)]
struct ToffoliJson {
    mode: &'static str,
    delta: f64,
    input: String,
    expected: String,
    error: f64,
    tolerance: f64,
    passed: bool,
    trace: TraceJson,
}

fn parse_bits(input: &str) -> Result<[bool; 3]> {
    let bits: Vec<bool> = input
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Config(format!("toffoli input must be three bits, got {input:?}"))),
        })
        .collect::<Result<_>>()?;
    bits.try_into().map_err(|_| CliError::Config(format!("toffoli input must be three bits, got {input:?}")))
}

fn bits_label(bits: [bool; 3]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn toffoli(s: &Settings, input: &str) -> Result<Report> {
    let bits = parse_bits(input)?;
    let engine = engine(s)?;
    let levels = bits.map(AtomLevel::qubit);
    let psi = basis_state(&levels, 0, s.n_max)?;
    let trace = engine.toffoli(&psi, 0, 1, 2)?;

    let out_bits = [bits[0], bits[1], bits[2] ^ (bits[0] && bits[1])];
    let expected = basis_state(&out_bits.map(AtomLevel::qubit), 0, s.n_max)?;
    let error = global_phase_align(&trace.final_state, &expected)?.max_abs_diff(&expected)?;
    let tolerance = mode_tolerance(engine.mode());
    let passed = error <= tolerance;

    let doc = ToffoliJson {
        mode: engine.mode().as_str(),
        delta: s.params.delta,
        input: bits_label(bits),
        expected: bits_label(out_bits),
        error,
        tolerance,
        passed,
        trace: TraceJson::new(&trace, s.dump_states),
    };
    let header = ["index", "label", "norm", "qubit_leakage", "vacuum_population", "dominant"];
    let rows: Vec<Vec<String>> = doc
        .trace
        .steps
        .iter()
        .map(|st| {
            vec![
                st.index.to_string(),
                st.label.clone(),
                format!("{:.9}", st.norm),
                format!("{:.3e}", st.qubit_leakage),
                format!("{:.9}", st.vacuum_population),
                st.dominant.clone(),
            ]
        })
        .collect();
    let body = match s.format {
        Format::Json => json_string(&doc)?,
        Format::Csv => csv_string(&header, &rows)?,
        Format::Table => format!(
            "toffoli |{}> -> |{}>  mode={}  delta={}\n\n{}\nphase-aligned error {:.3e} (tolerance {:e})\n{}\n",
            doc.input,
            doc.expected,
            doc.mode,
            doc.delta,
            render_table(&header, &rows),
            error,
            tolerance,
            verdict(passed)
        ),
    };
    Ok(Report::checked(body, (!passed).then(|| format!("toffoli error {error:.3e}"))))
}
