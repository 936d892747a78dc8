//! Eigen solvers for the laminated beam.
//!
//! * [`real_modes`] solves the undamped auxiliary problem `(K0 - ω0² M) φ0 = 0`.
//! * [`newton_solve`] iterates one complex eigenpair of
//!   `(K0 + G*_fr(ω) Kc - ω² M) φ = 0` with a bordered Newton method (CNM).
//! * [`mse_solve`] iterates a real approximation of the stiffness and
//!   estimates the loss factor by modal strain energy (MSE).

mod mse;
mod newton;
mod subspace;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use mse::{mse_solve, MseResult};
pub use newton::{newton_solve, residual_scale};
pub use subspace::{lowest_eigenpairs, real_modes, Subspace};

/// Iteration controls shared by all methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tolerance: f64,
    pub max_iter: usize,
    /// Number of elastic modes to report.
    pub modes: usize,
    /// Eigenvalues [rad²/s²] below this are treated as rigid-body modes.
    /// `None` uses `1e-6` times the largest requested eigenvalue.
    pub rigid_mode_cutoff: Option<f64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-5,
            max_iter: 50,
            modes: 3,
            rigid_mode_cutoff: None,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.modes == 0 {
            return Err(Error::InvalidParameter("at least one mode is required".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Undamped eigenpair; `shape` has unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEigenpair {
    pub omega0_squared: f64,
    pub shape: Vec<f64>,
}

/// Complex eigenpair of the nonlinear problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexEigenpair {
    pub omega: Complex64,
    pub omega_squared: Complex64,
    pub shape: Vec<Complex64>,
    pub iterations: usize,
    /// `‖T(ω)φ‖ / (‖φ‖ s)` at the returned pair.
    pub residual: f64,
}

impl ComplexEigenpair {
    pub fn frequency_and_loss(&self) -> Result<(f64, f64)> {
        freq_and_loss(self.omega_squared)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Complex Newton solver (reference).
    Cnm,
    /// Iterated real eigenproblem + modal strain energy.
    Mse,
    /// Dynamic effective thickness.
    Det,
    /// Enhanced effective thickness adapted to modal analysis.
    Eet,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Cnm, Method::Mse, Method::Det, Method::Eet];

    pub fn label(self) -> &'static str {
        match self {
            Method::Cnm => "cnm",
            Method::Mse => "mse",
            Method::Det => "det",
            Method::Eet => "eet",
        }
    }

    /// Parses a comma separated list such as `cnm,det`.
    pub fn parse_list(text: &str) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let m: Method = part.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("empty method list".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cnm" => Ok(Method::Cnm),
            "mse" => Ok(Method::Mse),
            "det" => Ok(Method::Det),
            "eet" => Ok(Method::Eet),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

/// Natural frequency and loss factor of one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalResult {
    pub mode_index: usize,
    /// [Hz]
    pub frequency: f64,
    pub loss_factor: f64,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
    /// Converged angular frequency [rad/s] (complex for CNM/DET/EET).
    pub omega: Complex64,
}

/// `f = √Re[ω²] / 2π`, `η = Im[ω²] / Re[ω²]`.
pub fn freq_and_loss(omega_squared: Complex64) -> Result<(f64, f64)> {
    if !(omega_squared.re > 0.0) {
        return Err(Error::NonPhysical(format!(
            "Re[ω²] = {} is not positive",
            omega_squared.re
        )));
    }
    Ok((
        omega_squared.re.sqrt() / (2.0 * std::f64::consts::PI),
        omega_squared.im / omega_squared.re,
    ))
}

/// Unsigned correlation `|aᵀb| / (‖a‖‖b‖)` of two real shapes.
pub(crate) fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot.abs() / (na * nb)
}

pub(crate) fn norm_c(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
