use num_complex::Complex64;

use super::subspace::{elastic_pairs, lowest_eigenpairs};
use super::{correlation, RealEigenpair, SolverSettings};
use crate::error::{Error, Result};
use crate::fem_beam::AssembledSystem;
use crate::materials::MaxwellChain;

/// Shapes correlating less than this with the starting mode are rejected.
pub const TRACKING_THRESHOLD: f64 = 0.7;

/// Result of the iterated real eigenproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct MseResult {
    /// Converged real pair of `(K_R(ω_R), M)`.
    pub pair: RealEigenpair,
    pub omega: f64,
    pub loss_factor: f64,
    pub iterations: usize,
    /// `|φᵀφ0|` of the tracked shape (both unit norm).
    pub correlation: f64,
}

impl MseResult {
    pub fn omega_squared(&self) -> Complex64 {
        Complex64::new(self.omega * self.omega, self.omega * self.omega * self.loss_factor)
    }
}

/// Iterates `K_R(ω_R) = K0 + Re[G*_fr(ω_R)] Kc` until the tracked frequency
/// settles, then evaluates the modal strain energy loss factor.
pub fn mse_solve(
    system: &AssembledSystem,
    chain: &MaxwellChain,
    start: &RealEigenpair,
    settings: &SolverSettings,
) -> Result<MseResult> {
    settings.validate()?;
    if !(start.omega0_squared > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "starting eigenvalue must be positive, got {}",
            start.omega0_squared
        )));
    }
    let rigid = system.bc.map_or(3, |bc| bc.rigid_modes());
    let count = (settings.modes + 3 + rigid).min(system.size());

    let mut omega = start.omega0_squared.sqrt();
    let mut warm: Option<Vec<Vec<f64>>> = None;
    let mut last_change = f64::INFINITY;
    for iteration in 1..=settings.max_iter {
        let g = chain.frequency_part(Complex64::new(omega, 0.0))?.value();
        let k = system.real_stiffness(g.re);
        let sub = lowest_eigenpairs(&k, &system.m, count, warm.as_deref())?;
        let candidates = elastic_pairs(&sub, count, settings.rigid_mode_cutoff);
        let (best, corr) = candidates
            .iter()
            .map(|p| (p, correlation(&p.shape, &start.shape)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::TooFewModes { requested: 1, found: 0 })?;
        if corr < TRACKING_THRESHOLD {
            return Err(Error::TrackingFailure {
                correlation: corr,
                threshold: TRACKING_THRESHOLD,
            });
        }
        let next = best.omega0_squared.sqrt();
        last_change = (next - omega).abs() / next;
        omega = next;
        if last_change < settings.tolerance {
            let g = chain.frequency_part(Complex64::new(omega, 0.0))?.value();
            let k = system.real_stiffness(g.re);
            let shape = best.shape.clone();
            let loss = g.im * system.kc.quadratic_form(&shape) / k.quadratic_form(&shape);
            return Ok(MseResult {
                pair: RealEigenpair {
                    omega0_squared: best.omega0_squared,
                    shape,
                },
                omega,
                loss_factor: loss,
                iterations: iteration,
                correlation: corr,
            });
        }
        warm = Some(sub.vectors);
    }
    Err(Error::NotConverged {
        method: "mse",
        iterations: settings.max_iter,
        last_change,
    })
}
