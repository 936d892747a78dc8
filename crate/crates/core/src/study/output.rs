use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CaseResult, RunOptions, SummaryStats};
use crate::eigen::Method;
use crate::error::Result;

pub const CASES_CSV: &str = "cases.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const QQ_CSV: &str = "qq_mode1.csv";

pub const CSV_HEADER: [&str; 16] = [
    "case_id",
    "bc",
    "h1",
    "h2",
    "h3",
    "material",
    "temp_C",
    "mode",
    "method",
    "f_hz",
    "eta",
    "iters",
    "converged",
    "err_f_vs_cnm",
    "err_eta_vs_cnm",
    "extrapolated_material",
];

/// One line of `cases.csv`; thicknesses in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case_id: String,
    pub bc: String,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub material: String,
    #[serde(rename = "temp_C")]
    pub temp_c: f64,
    pub mode: usize,
    pub method: Method,
    pub f_hz: f64,
    pub eta: f64,
    pub iters: usize,
    pub converged: bool,
    pub err_f_vs_cnm: f64,
    pub err_eta_vs_cnm: f64,
    pub extrapolated_material: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Failure {
    case_id: String,
    mode: usize,
    method: Method,
    reason: String,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    case_count: usize,
    options: &'a RunOptions,
    failures: Vec<Failure>,
    #[serde(flatten)]
    stats: &'a SummaryStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct QqRow {
    case_id: String,
    bc: String,
    material: String,
    method: Method,
    f_cnm: f64,
    f_method: f64,
    eta_cnm: f64,
    eta_method: f64,
}

fn mm(h: f64) -> f64 {
    (h * 1e9).round() / 1e6
}

fn case_rows(results: &[CaseResult]) -> Vec<CaseRow> {
    results
        .iter()
        .flat_map(|c| {
            c.rows.iter().map(move |r| CaseRow {
                case_id: c.spec.id.clone(),
                bc: c.spec.bc.label().to_string(),
                h1: mm(c.spec.section.h1),
                h2: mm(c.spec.section.h2),
                h3: mm(c.spec.section.h3),
                material: c.spec.material.clone(),
                temp_c: c.spec.temperature,
                mode: r.mode,
                method: r.method,
                f_hz: r.frequency,
                eta: r.loss_factor,
                iters: r.iterations,
                converged: r.converged,
                err_f_vs_cnm: r.err_f_vs_cnm,
                err_eta_vs_cnm: r.err_eta_vs_cnm,
                extrapolated_material: c.extrapolated_material,
            })
        })
        .collect()
}

/// Write `cases.csv`, `summary.json` and `qq_mode1.csv` into `dir`.
pub fn emit(results: &[CaseResult], stats: &SummaryStats, options: &RunOptions, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;

    let mut w = csv::Writer::from_path(dir.join(CASES_CSV))?;
    for row in case_rows(results) {
        w.serialize(row)?;
    }
    w.flush()?;

    let mut qq = csv::Writer::from_path(dir.join(QQ_CSV))?;
    for c in results {
        let Some(reference) = c.row(1, Method::Cnm).filter(|r| r.converged) else {
            continue;
        };
        for r in c
            .rows
            .iter()
            .filter(|r| r.mode == 1 && r.method != Method::Cnm && r.converged)
        {
            qq.serialize(QqRow {
                case_id: c.spec.id.clone(),
                bc: c.spec.bc.label().to_string(),
                material: c.spec.material.clone(),
                method: r.method,
                f_cnm: reference.frequency,
                f_method: r.frequency,
                eta_cnm: reference.loss_factor,
                eta_method: r.loss_factor,
            })?;
        }
    }
    qq.flush()?;

    let failures = results
        .iter()
        .flat_map(|c| {
            c.rows.iter().filter_map(move |r| {
                r.failure.as_ref().map(|reason| Failure {
                    case_id: c.spec.id.clone(),
                    mode: r.mode,
                    method: r.method,
                    reason: reason.clone(),
                })
            })
        })
        .collect();
    let summary = Summary {
        case_count: results.len(),
        options,
        failures,
        stats,
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(dir.join(SUMMARY_JSON), text)?;
    Ok(())
}

/// Read back a `cases.csv` file.
pub fn read_cases_csv(path: &Path) -> Result<Vec<CaseRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<CaseRow>, _>>()?;
    Ok(rows)
}
