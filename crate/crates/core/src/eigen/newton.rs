use num_complex::Complex64;

use super::{norm_c, ComplexEigenpair, RealEigenpair, SolverSettings};
use crate::band::{BandLu, BandMatrix};
use crate::error::{Error, Result};
use crate::fem_beam::AssembledSystem;
use crate::materials::MaxwellChain;

/// Residual scale `s = ω0² ‖M φ0‖ / ‖φ0‖` of the stopping test
/// `‖T(ω)φ‖ / ‖φ‖ < ε s`. This is the size of the inertia (and elastic)
/// force of the starting mode, so `ε` acts as a relative tolerance.
pub fn residual_scale(system: &AssembledSystem, start: &RealEigenpair) -> f64 {
    let mphi = system.m.mul_vec(&start.shape);
    let num = mphi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let den = start.shape.iter().map(|v| v * v).sum::<f64>().sqrt();
    start.omega0_squared * num / den
}

fn weighted_residual(
    system: &AssembledSystem,
    chain: &MaxwellChain,
    omega: Complex64,
    phi: &[Complex64],
    scale: f64,
) -> Result<f64> {
    let g = chain.frequency_part(omega)?.value();
    let t = system.dynamic_matrix(g, omega * omega);
    Ok(norm_c(&t.mul_vec(phi)) / norm_c(phi) / scale)
}

/// Complex eigenpair of `T(ω) φ = 0` by Newton's method on the bordered
/// system with normalization `φ0ᵀ φ = φ0ᵀ φ0`.
pub fn newton_solve(
    system: &AssembledSystem,
    chain: &MaxwellChain,
    start: &RealEigenpair,
    settings: &SolverSettings,
) -> Result<ComplexEigenpair> {
    settings.validate()?;
    if !(start.omega0_squared > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "starting eigenvalue must be positive, got {}",
            start.omega0_squared
        )));
    }
    let n = system.size();
    if start.shape.len() != n {
        return Err(Error::InvalidParameter(format!(
            "shape has {} entries, system has {n}",
            start.shape.len()
        )));
    }
    let scale = residual_scale(system, start);
    let phi0: Vec<Complex64> = start.shape.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let phi0_sq: f64 = start.shape.iter().map(|v| v * v).sum();

    let mut omega = Complex64::new(start.omega0_squared.sqrt(), 0.0);
    let mut phi = phi0.clone();
    let mut residual = f64::INFINITY;
    for iteration in 1..=settings.max_iter {
        let g = chain.frequency_part(omega)?.value();
        let dg = chain.frequency_part_derivative(omega)?;
        let t = system.dynamic_matrix(g, omega * omega);
        let dt = BandMatrix::combine_complex(&[(dg, &system.kc), (-2.0 * omega, &system.m)]);
        let lu = BandLu::factor(&t)?;
        let x1 = lu.solve(&dt.mul_vec(&phi));
        let denom: Complex64 = phi0.iter().zip(&x1).map(|(a, b)| a * b).sum();
        if denom.norm() == 0.0 || !denom.is_finite() {
            return Err(Error::Singular("bordered Newton system".into()));
        }
        let delta = -phi0_sq / denom;
        phi = x1.iter().map(|v| -delta * v).collect();
        omega += delta;
        if !omega.is_finite() {
            return Err(Error::NotConverged {
                method: "cnm",
                iterations: iteration,
                last_change: f64::NAN,
            });
        }

        residual = weighted_residual(system, chain, omega, &phi, scale)?;
        if residual < settings.tolerance {
            let omega_squared = omega * omega;
            if !(omega_squared.re > 0.0) {
                return Err(Error::NonPhysical(format!(
                    "converged to Re[ω²] = {}",
                    omega_squared.re
                )));
            }
            return Ok(ComplexEigenpair {
                omega,
                omega_squared,
                shape: phi,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NotConverged {
        method: "cnm",
        iterations: settings.max_iter,
        last_change: residual,
    })
}
