use cavqed_core::hilbert::AtomLevel;
use cavqed_core::protocol::{table_one_row, CsignStep};
use serde::Serialize;

use super::{engine, fmt_complex, mode_tolerance, verdict};
use crate::config::{Format, Settings};
use crate::error::Result;
use crate::formats::{csv_string, dominant_ket, json_string, render_table, snapshot, StateJson};
use crate::Report;

#[derive(Serialize)]
struct StepJson {
    step: usize,
    description: &'static str,
    expected: String,
    dominant: String,
    error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<StateJson>,
}

#[derive(Serialize)]
struct RowJson {
    input: String,
    sign: i8,
    expected_sign: i8,
    max_error: f64,
    qubit_leakage: f64,
    passed: bool,
    steps: Vec<StepJson>,
}

#[derive(Serialize)]
struct TableJson {
    mode: &'static str,
    delta: f64,
    tolerance: f64,
    global_phase: f64,
    passed: bool,
    rows: Vec<RowJson>,
}

fn ket(levels: &[AtomLevel; 2], sign: f64) -> String {
    format!("{}|{}{}>", if sign < 0.0 { "-" } else { "+" }, levels[0], levels[1])
}

pub fn truth_table(s: &Settings, tol: Option<f64>) -> Result<Report> {
    let engine = engine(s)?;
    let tol = tol.unwrap_or_else(|| mode_tolerance(engine.mode()));
    let table = engine.truth_table(s.n_max)?;

    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for row in &table.rows {
        let ideal = table_one_row(row.input[0], row.input[1]);
        let expected_sign = if ideal[4].1 < 0.0 { -1 } else { 1 };
        let passed = row.sign == expected_sign && row.max_error() <= tol;
        if !passed {
            failed.push(row.label());
        }
        let steps = CsignStep::ALL
            .iter()
            .zip(&ideal)
            .enumerate()
            .map(|(k, (step, (levels, sign)))| {
                let (dominant, amp) = dominant_ket(&row.snapshots[k]);
                StepJson {
                    step: step.number(),
                    description: step.description(),
                    expected: ket(levels, *sign),
                    dominant: format!("{} {dominant}", fmt_complex(amp)),
                    error: row.step_errors[k],
                    state: snapshot(&row.snapshots[k], s.dump_states),
                }
            })
            .collect();
        rows.push(RowJson {
            input: row.label(),
            sign: row.sign,
            expected_sign,
            max_error: row.max_error(),
            qubit_leakage: row.qubit_leakage,
            passed,
            steps,
        });
    }
    let passed = failed.is_empty();
    let doc = TableJson {
        mode: engine.mode().as_str(),
        delta: s.params.delta,
        tolerance: tol,
        global_phase: table.global_phase,
        passed,
        rows,
    };

    let flat: Vec<Vec<String>> = doc
        .rows
        .iter()
        .flat_map(|r| {
            r.steps.iter().map(move |st| {
                vec![
                    r.input.clone(),
                    st.step.to_string(),
                    st.description.to_string(),
                    st.expected.clone(),
                    st.dominant.clone(),
                    format!("{:.3e}", st.error),
                ]
            })
        })
        .collect();
    let header = ["input", "step", "description", "expected", "dominant", "error"];
    let body = match s.format {
        Format::Json => json_string(&doc)?,
        Format::Csv => csv_string(&header, &flat)?,
        Format::Table => {
            let mut out = format!(
                "c-sign truth table  mode={}  delta={}  tolerance={:e}\n\n",
                doc.mode, doc.delta, doc.tolerance
            );
            out.push_str(&render_table(&header, &flat));
            out.push('\n');
            let summary: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.input.clone(),
                        format!("{:+}", r.sign),
                        format!("{:.3e}", r.max_error),
                        format!("{:.3e}", r.qubit_leakage),
                        verdict(r.passed).to_string(),
                    ]
                })
                .collect();
            out.push_str(&render_table(&["input", "sign", "max_error", "leakage", "result"], &summary));
            out.push_str(&format!("\n{}\n", verdict(passed)));
            out
        }
    };
    Ok(Report::checked(body, (!passed).then(|| format!("rows {}", failed.join(", ")))))
}
