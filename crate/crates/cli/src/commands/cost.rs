use cavqed_core::circuits::{nonlocal_gate_cost, CostModel, CostReport};
use serde::Serialize;

use crate::config::{Format, Settings};
use crate::error::Result;
use crate::formats::{csv_string, json_string, render_table};
use crate::Report;

#[derive(Serialize)]
struct CostJson {
    n_qubits: usize,
    fault_factor: u64,
    swap_ops: u64,
    extra_cnots: u64,
    extra_ft_ops: u64,
    nonlocal_ops: u64,
    chain_extra_cnots: Option<u64>,
}

impl From<CostReport> for CostJson {
    fn from(r: CostReport) -> Self {
        CostJson {
            n_qubits: r.n_qubits,
            fault_factor: r.fault_factor,
            swap_ops: r.swap_ops,
            extra_cnots: r.extra_cnots,
            extra_ft_ops: r.extra_ft_ops,
            nonlocal_ops: r.nonlocal_ops,
            chain_extra_cnots: r.chain_extra_cnots,
        }
    }
}

pub fn cost(s: &Settings) -> Result<Report> {
    let reports = s
        .n_range
        .iter()
        .map(|n| Ok(CostJson::from(nonlocal_gate_cost(&CostModel::new(n, s.fault_factor)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let header = ["n_qubits", "swap_ops", "extra_cnots", "extra_ft_ops", "nonlocal_ops", "chain_extra_cnots"];
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.n_qubits.to_string(),
                r.swap_ops.to_string(),
                r.extra_cnots.to_string(),
                r.extra_ft_ops.to_string(),
                r.nonlocal_ops.to_string(),
                r.chain_extra_cnots.map_or("-".into(), |c| c.to_string()),
            ]
        })
        .collect();
    let body = match s.format {
        Format::Json => json_string(&reports)?,
        Format::Csv => csv_string(&header, &rows)?,
        Format::Table => format!("fault_factor={}\n\n{}", s.fault_factor, render_table(&header, &rows)),
    };
    Ok(Report::ok(body))
}
