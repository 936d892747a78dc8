//! Parameter study over boundary conditions, cross sections and interlayers.
//!
//! Every case is solved by the requested methods for the first modes and
//! compared with the Newton (CNM) reference. Cases run in parallel; results
//! keep the input order.

mod config;
mod output;
mod stats;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effective::effective_solution;
use crate::eigen::{mse_solve, newton_solve, real_modes, Method, SolverSettings};
use crate::error::{Error, Result};
use crate::fem_beam::{build_system, BoundaryCondition, CrossSection, LaminatedBeam};
use crate::materials::MaterialDatabase;

pub use config::{CaseConfig, StudyConfig};
pub use output::{emit, read_cases_csv, CaseRow, CASES_CSV, CSV_HEADER, QQ_CSV, SUMMARY_JSON};
pub use stats::{pearson, percentile, summarize, BoxStats, GroupKey, PearsonEntry, SummaryStats};

/// Sections of the built-in matrix, `h1/h2/h3` in mm.
pub const SECTIONS_MM: [[f64; 3]; 3] = [[10.0, 0.76, 10.0], [15.0, 0.76, 5.0], [10.0, 1.52, 10.0]];

/// Interlayer and temperature pairs of the built-in matrix.
pub const MATERIAL_TEMPERATURES: [(&str, f64); 7] = [
    ("SGP_M", 25.0),
    ("TPU_M", 25.0),
    ("PVB_M", 25.0),
    ("PVB_S", 25.0),
    ("PVB_S", 50.0),
    ("PVB_A", 25.0),
    ("PVB_A", 50.0),
];

/// Converged angular frequencies outside `2π·[1e-2, 1e4]` rad/s are flagged
/// as evaluating the interlayer model outside its usual range.
pub const MATERIAL_RANGE_HZ: (f64, f64) = (1e-2, 1e4);

/// One beam of the study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub id: String,
    pub bc: BoundaryCondition,
    pub section: CrossSection,
    pub material: String,
    /// Glass record used for both plies.
    pub glass: String,
    /// [°C]
    pub temperature: f64,
    /// [m]
    pub length: f64,
}

impl CaseSpec {
    pub fn new(bc: BoundaryCondition, section: CrossSection, material: &str, temperature: f64) -> Self {
        Self {
            id: format!("{}-{}-{}-{}C", bc.label(), section.label_mm(), material, temperature),
            bc,
            section,
            material: material.to_string(),
            glass: "glass".to_string(),
            temperature,
            length: 1.0,
        }
    }

    pub fn beam(&self, db: &MaterialDatabase) -> Result<LaminatedBeam> {
        let glass = db.glass(&self.glass)?;
        LaminatedBeam::new(
            self.length,
            self.section,
            glass,
            glass,
            db.interlayer(&self.material)?,
            self.bc,
            self.temperature,
        )
    }
}

/// The 63 cases: boundary conditions × sections × interlayer/temperature.
pub fn generate_matrix() -> Vec<CaseSpec> {
    let mut cases = Vec::with_capacity(63);
    for bc in BoundaryCondition::ALL {
        for [h1, h2, h3] in SECTIONS_MM {
            let section = CrossSection::from_mm(h1, h2, h3, 100.0).expect("valid built-in section");
            for (material, t) in MATERIAL_TEMPERATURES {
                cases.push(CaseSpec::new(bc, section, material, t));
            }
        }
    }
    cases
}

/// Solver options shared by all cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub methods: Vec<Method>,
    pub settings: SolverSettings,
    /// Elements per layer.
    pub elements: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            settings: SolverSettings::default(),
            elements: 200,
        }
    }
}

/// One (mode, method) cell of a case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub mode: usize,
    pub method: Method,
    /// [Hz], NaN when the method failed.
    pub frequency: f64,
    pub loss_factor: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    /// `|ω|` of the converged pair [rad/s].
    pub omega_abs: f64,
    pub failure: Option<String>,
    pub err_f_vs_cnm: f64,
    pub err_eta_vs_cnm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub spec: CaseSpec,
    pub rows: Vec<MethodRow>,
    pub extrapolated_material: bool,
}

impl CaseResult {
    pub fn row(&self, mode: usize, method: Method) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.mode == mode && r.method == method)
    }
}

fn failed(mode: usize, method: Method, err: &Error) -> MethodRow {
    MethodRow {
        mode,
        method,
        frequency: f64::NAN,
        loss_factor: f64::NAN,
        iterations: match err {
            Error::NotConverged { iterations, .. } => *iterations,
            _ => 0,
        },
        converged: false,
        residual: f64::NAN,
        omega_abs: f64::NAN,
        failure: Some(err.to_string()),
        err_f_vs_cnm: f64::NAN,
        err_eta_vs_cnm: f64::NAN,
    }
}

fn success(
    mode: usize,
    method: Method,
    f: f64,
    eta: f64,
    iterations: usize,
    residual: f64,
    omega_abs: f64,
) -> MethodRow {
    MethodRow {
        mode,
        method,
        frequency: f,
        loss_factor: eta,
        iterations,
        converged: true,
        residual,
        omega_abs,
        failure: None,
        err_f_vs_cnm: f64::NAN,
        err_eta_vs_cnm: f64::NAN,
    }
}

/// `|x - reference| / |reference|`; zero when both vanish.
pub fn relative_error(x: f64, reference: f64) -> f64 {
    if x == reference {
        0.0
    } else {
        (x - reference).abs() / reference.abs()
    }
}

fn cell(mode: usize, method: Method, r: Result<MethodRow>) -> MethodRow {
    r.unwrap_or_else(|e| failed(mode, method, &e))
}

/// Solve one case with every requested method for modes `1..=modes`.
/// Solver failures are recorded per cell; only invalid input is an error.
pub fn run_case(spec: &CaseSpec, db: &MaterialDatabase, options: &RunOptions) -> Result<CaseResult> {
    options.settings.validate()?;
    let beam = spec.beam(db)?;
    let chain = beam.chain()?;
    let settings = &options.settings;
    let modes = settings.modes;
    let needs_fe = options.methods.iter().any(|m| matches!(m, Method::Cnm | Method::Mse));

    let real = if needs_fe {
        let system = build_system(&beam, options.elements)?;
        let starts = real_modes(&system, modes, settings);
        Some((system, starts))
    } else {
        None
    };

    let mut rows = Vec::with_capacity(modes * options.methods.len());
    for mode in 1..=modes {
        for &method in &options.methods {
            let row = match method {
                Method::Cnm | Method::Mse => {
                    let (system, starts) = real.as_ref().expect("FE system built");
                    let start = match starts {
                        Ok(s) => &s[mode - 1],
                        Err(e) => {
                            rows.push(failed(mode, method, e));
                            continue;
                        }
                    };
                    if method == Method::Cnm {
                        cell(
                            mode,
                            method,
                            newton_solve(system, &chain, start, settings).and_then(|p| {
                                let (f, eta) = p.frequency_and_loss()?;
                                Ok(success(mode, method, f, eta, p.iterations, p.residual, p.omega.norm()))
                            }),
                        )
                    } else {
                        cell(
                            mode,
                            method,
                            mse_solve(system, &chain, start, settings).map(|r| {
                                success(
                                    mode,
                                    method,
                                    r.omega / (2.0 * PI),
                                    r.loss_factor,
                                    r.iterations,
                                    f64::NAN,
                                    r.omega,
                                )
                            }),
                        )
                    }
                }
                Method::Det | Method::Eet => cell(
                    mode,
                    method,
                    effective_solution(&beam, &chain, method, mode, settings).map(|s| {
                        let r = s.result;
                        success(
                            mode,
                            method,
                            r.frequency,
                            r.loss_factor,
                            r.iterations,
                            r.residual,
                            r.omega.norm(),
                        )
                    }),
                ),
            };
            rows.push(row);
        }
    }

    for mode in 1..=modes {
        let reference = rows
            .iter()
            .find(|r| r.mode == mode && r.method == Method::Cnm && r.converged)
            .map(|r| (r.frequency, r.loss_factor));
        if let Some((f, eta)) = reference {
            for r in rows.iter_mut().filter(|r| r.mode == mode && r.converged) {
                r.err_f_vs_cnm = relative_error(r.frequency, f);
                r.err_eta_vs_cnm = relative_error(r.loss_factor, eta);
            }
        }
    }

    let (lo, hi) = (2.0 * PI * MATERIAL_RANGE_HZ.0, 2.0 * PI * MATERIAL_RANGE_HZ.1);
    let extrapolated_material = !chain.is_elastic()
        && rows
            .iter()
            .filter(|r| r.converged)
            .any(|r| r.omega_abs < lo || r.omega_abs > hi);

    Ok(CaseResult {
        spec: spec.clone(),
        rows,
        extrapolated_material,
    })
}

/// Run all cases in parallel; the output order follows `cases`.
pub fn run_study(cases: &[CaseSpec], db: &MaterialDatabase, options: &RunOptions) -> Result<Vec<CaseResult>> {
    options.settings.validate()?;
    if options.methods.is_empty() {
        return Err(Error::InvalidParameter("no methods selected".into()));
    }
    cases.par_iter().map(|c| run_case(c, db, options)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_layout() {
        let cases = generate_matrix();
        assert_eq!(cases.len(), 63);
        assert!(cases
            .iter()
            .filter(|c| c.temperature == 50.0)
            .all(|c| c.material == "PVB_S" || c.material == "PVB_A"));
        let mut ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 63);
        assert_eq!(cases[0].id, "SS-10/0.76/10-SGP_M-25C");
        assert!(cases
            .iter()
            .all(|c| c.length == 1.0 && (c.section.b - 0.1).abs() < 1e-15));
    }

    #[test]
    fn relative_error_conventions() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(1.1, 1.0), 0.10000000000000009);
        assert!(relative_error(1.0, 0.0).is_infinite());
    }

    #[test]
    fn single_case_rows() {
        let spec = CaseSpec::new(
            BoundaryCondition::SimplySupported,
            CrossSection::from_mm(10.0, 0.76, 10.0, 100.0).unwrap(),
            "PVB_M",
            25.0,
        );
        let options = RunOptions {
            elements: 30,
            ..Default::default()
        };
        let r = run_case(&spec, MaterialDatabase::builtin(), &options).unwrap();
        assert_eq!(r.rows.len(), 12);
        assert!(r.rows.iter().all(|row| row.converged));
        for mode in 1..=3 {
            assert_eq!(r.row(mode, Method::Cnm).unwrap().err_f_vs_cnm, 0.0);
            let det = r.row(mode, Method::Det).unwrap();
            let eet = r.row(mode, Method::Eet).unwrap();
            assert!((det.frequency - eet.frequency).abs() <= 1e-10 * det.frequency);
        }
        assert!(!r.extrapolated_material);
    }

    #[test]
    fn unknown_material_is_an_error() {
        let mut spec = generate_matrix().remove(0);
        spec.material = "EVA".into();
        assert!(matches!(
            run_case(&spec, MaterialDatabase::builtin(), &RunOptions::default()),
            Err(Error::UnknownMaterial(_))
        ));
    }
}
