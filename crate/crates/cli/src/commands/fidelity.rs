use cavqed_core::fidelity::{experimental_params, fidelity_report, FidelityReport};
use cavqed_core::model::PhysicalParams;
use rayon::prelude::*;
use serde::Serialize;

use super::verdict;
use crate::config::{Format, Settings};
use crate::error::{CliError, Result};
use crate::formats::{csv_string, json_string, render_table};
use crate::reference::{
    fidelity_reference, ANALYTIC_TOL, EXPERIMENT_TARGET, EXPERIMENT_TOL, NUMERIC_TOL, REFERENCE_DELTA,
};
use crate::Report;

#[derive(Serialize)]
struct Reference {
    f_analytic: f64,
    f_numeric: f64,
}

#[derive(Serialize)]
struct Row {
    gamma: f64,
    kappa: f64,
    delta: f64,
    t_gate: f64,
    f_analytic: f64,
    f_numeric: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<Reference>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Serialize)]
struct Sweep {
    passed: bool,
    rows: Vec<Row>,
}

pub fn fidelity(s: &Settings, reference_grid: bool, experimental: bool) -> Result<Report> {
    let reference = reference_grid.then(fidelity_reference);
    let points: Vec<PhysicalParams> = if let Some(table) = &reference {
        if s.params.delta != REFERENCE_DELTA || s.params.omega_c != 1.0 {
            return Err(CliError::Config(format!(
                "the reference grid is fixed at delta = {REFERENCE_DELTA}, omega_c = 1"
            )));
        }
        table.iter().map(|r| PhysicalParams::new(REFERENCE_DELTA, r.kappa, r.gamma)).collect()
    } else if experimental {
        vec![experimental_params()]
    } else if let Some(grid) = &s.grid {
        grid.iter().map(|&(gamma, kappa)| PhysicalParams { gamma, kappa, ..s.params }).collect()
    } else {
        vec![s.params]
    };

    // parallel over points, collected in grid order
    let reports: Vec<FidelityReport> =
        points.par_iter().map(|p| fidelity_report(p, &s.integrator)).collect::<std::result::Result<_, _>>()?;

    let mut failures = Vec::new();
    let rows: Vec<Row> = reports
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let reference = reference.as_ref().map(|t| {
                let want = t[i];
                if (r.f_analytic - want.f_analytic).abs() > ANALYTIC_TOL
                    || (r.f_numeric - want.f_numeric).abs() > NUMERIC_TOL
                {
                    failures.push(format!("gamma={} kappa={}", r.gamma, r.kappa));
                }
                Reference { f_analytic: want.f_analytic, f_numeric: want.f_numeric }
            });
            if experimental && (r.f_numeric - EXPERIMENT_TARGET).abs() > EXPERIMENT_TOL {
                failures.push(format!("experimental F' = {:.6}", r.f_numeric));
            }
            Row {
                gamma: r.gamma,
                kappa: r.kappa,
                delta: r.delta,
                t_gate: r.t_gate,
                f_analytic: r.f_analytic,
                f_numeric: r.f_numeric,
                reference,
                notes: r.notes,
            }
        })
        .collect();
    let passed = failures.is_empty();

    let six = |x: f64| format!("{x:.6}");
    let header = ["gamma", "kappa", "delta", "t_gate", "f_analytic", "f_numeric"];
    let base = |r: &Row| vec![six(r.gamma), six(r.kappa), six(r.delta), six(r.t_gate), six(r.f_analytic), six(r.f_numeric)];
    let body = match s.format {
        Format::Json => json_string(&Sweep { passed, rows })?,
        Format::Csv => csv_string(&header, &rows.iter().map(base).collect::<Vec<_>>())?,
        Format::Table => {
            let mut header = header.to_vec();
            let table_rows: Vec<Vec<String>> = if reference.is_some() {
                header.extend(["ref_analytic", "ref_numeric"]);
                rows.iter()
                    .map(|r| {
                        let mut cells = base(r);
                        let re = r.reference.as_ref().expect("reference row");
                        cells.extend([six(re.f_analytic), six(re.f_numeric)]);
                        cells
                    })
                    .collect()
            } else {
                rows.iter().map(base).collect()
            };
            let mut out = render_table(&header, &table_rows);
            for r in &rows {
                for n in &r.notes {
                    out.push_str(&format!("note (gamma={}, kappa={}): {n}\n", r.gamma, r.kappa));
                }
            }
            if reference.is_some() {
                out.push_str(&format!("\nreference tolerance: F {ANALYTIC_TOL:e}, F' {NUMERIC_TOL:e}\n"));
            }
            if experimental {
                out.push_str(&format!("\nexpected F' = {EXPERIMENT_TARGET} +- {EXPERIMENT_TOL}\n"));
            }
            if reference.is_some() || experimental {
                out.push_str(&format!("{}\n", verdict(passed)));
            }
            out
        }
    };
    Ok(Report::checked(body, (!passed).then(|| failures.join("; "))))
}
