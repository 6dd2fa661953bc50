//! File formats: state and trace JSON, dynamics trace CSV, aligned tables.

use std::path::Path;

use cavqed_core::dynamics::TraceSample;
use cavqed_core::hilbert::{BasisIndex, Shape, SystemState};
use cavqed_core::protocol::ProtocolTrace;
use cavqed_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest state (in amplitudes) written into a trace snapshot.
pub const MAX_DUMP_AMPLITUDES: usize = 4096;

/// `{n_atoms, n_max, amplitudes: [[re, im], ...]}` in flat-index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub n_atoms: usize,
    pub n_max: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&SystemState> for StateJson {
    fn from(s: &SystemState) -> Self {
        StateJson {
            n_atoms: s.n_atoms(),
            n_max: s.n_max(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<StateJson> for SystemState {
    type Error = CliError;

    fn try_from(j: StateJson) -> Result<Self> {
        let shape = Shape::new(j.n_atoms, j.n_max)?;
        let amps = j.amplitudes.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        Ok(SystemState::from_amplitudes(shape, amps)?)
    }
}

pub fn read_state(path: &Path) -> Result<SystemState> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let json: StateJson =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    json.try_into()
}

/// Basis state carrying the largest amplitude, with that amplitude.
pub fn dominant_ket(state: &SystemState) -> (String, C64) {
    let (flat, amp) = state
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, a)| (i, *a))
        .unwrap_or((0, C64::new(0.0, 0.0)));
    let label = BasisIndex::unflatten(flat, state.shape()).map(|b| b.to_string()).unwrap_or_default();
    (label, amp)
}

/// Snapshot unless disabled or too large.
pub fn snapshot(state: &SystemState, dump: bool) -> Option<StateJson> {
    (dump && state.amplitudes().len() <= MAX_DUMP_AMPLITUDES).then(|| state.into())
}

#[derive(Debug, Serialize)]
pub struct TraceStepJson {
    pub index: usize,
    pub label: String,
    pub norm: f64,
    pub qubit_leakage: f64,
    pub vacuum_population: f64,
    pub dominant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateJson>,
}

#[derive(Debug, Serialize)]
pub struct TraceJson {
    pub steps: Vec<TraceStepJson>,
    pub final_norm: f64,
    pub qubit_leakage: f64,
    pub vacuum_population: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_state: Option<StateJson>,
}

impl TraceJson {
    pub fn new(trace: &ProtocolTrace, dump: bool) -> Self {
        let steps = trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| TraceStepJson {
                index: i + 1,
                label: s.label.to_string(),
                norm: s.state.norm(),
                qubit_leakage: s.state.non_qubit_population(),
                vacuum_population: s.state.vacuum_population(),
                dominant: dominant_ket(&s.state).0,
                state: snapshot(&s.state, dump),
            })
            .collect();
        TraceJson {
            steps,
            final_norm: trace.final_state.norm(),
            qubit_leakage: trace.qubit_leakage(),
            vacuum_population: trace.cavity_vacuum_population(),
            final_state: snapshot(&trace.final_state, dump),
        }
    }
}

/// Per-step `t,norm,leakage` of one integration.
pub fn write_samples_csv(path: &Path, samples: &[TraceSample]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    w.write_record(["t", "norm", "leakage"])?;
    for s in samples {
        w.write_record([format!("{:.9}", s.t), format!("{:.12}", s.norm), format!("{:.6e}", s.leakage)])?;
    }
    w.flush().map_err(|e| CliError::io(path.display(), e))
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Columns padded to their widest cell; numbers right-aligned.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let numeric = |c: &str| c.parse::<f64>().is_ok();
    let line = |cells: Vec<&str>| {
        let mut out = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let pad = w.saturating_sub(c.chars().count());
            if numeric(c) {
                out.push_str(&" ".repeat(pad));
                out.push_str(c);
            } else {
                out.push_str(c);
                out.push_str(&" ".repeat(pad));
            }
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
        out
    };
    let mut out = line(header.to_vec());
    out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
