//! Independent reference solutions: the Euler-Bernoulli monolith and a
//! dense fixed-point solver for the complex eigenproblem.
//!
//! The dense solver takes a different path from the banded Newton solver:
//! every iteration computes the full spectrum of the complex symmetric pencil
//! `(K0 + G*_fr(ω) Kc, M)` through a Cholesky reduction and a complex Schur
//! decomposition, and follows the target mode by shape correlation.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::effective::wavenumber;
use crate::eigen::{residual_scale, ComplexEigenpair, RealEigenpair, SolverSettings};
use crate::error::{Error, Result};
use crate::fem_beam::{AssembledSystem, BoundaryCondition};
use crate::materials::MaxwellChain;

/// Largest system accepted by [`dense_fixed_point_eig`].
pub const MAX_DENSE_DOFS: usize = 600;

/// Number of eigenvalues nearest the current iterate considered for tracking.
const CANDIDATES: usize = 6;
const TRACKING_THRESHOLD: f64 = 0.7;

/// Homogeneous rectangular beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonolithSpec {
    /// Young's modulus [Pa]
    pub young_modulus: f64,
    /// [kg/m³]
    pub density: f64,
    /// Thickness [m]
    pub thickness: f64,
    /// Width [m]
    pub width: f64,
    /// Length [m]
    pub length: f64,
    pub bc: BoundaryCondition,
}

/// Euler-Bernoulli natural frequency [Hz] of `mode` (1..=3),
/// `f = β² √(E h² / (12 ρ)) / 2π`.
pub fn euler_bernoulli_frequency(spec: &MonolithSpec, mode: usize) -> Result<f64> {
    let beta = wavenumber(spec.bc, mode, spec.length)?;
    let stiffness = spec.young_modulus * spec.thickness * spec.thickness / (12.0 * spec.density);
    Ok(beta * beta * stiffness.sqrt() / (2.0 * std::f64::consts::PI))
}

fn complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Eigenvector of the upper triangular `t` for its `k`-th diagonal entry.
fn triangular_eigenvector(t: &DMatrix<Complex64>, k: usize) -> DVector<Complex64> {
    let n = t.nrows();
    let lambda = t[(k, k)];
    let scale = t.diagonal().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut z = DVector::from_element(n, Complex64::new(0.0, 0.0));
    z[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let mut s = Complex64::new(0.0, 0.0);
        for j in i + 1..=k {
            s += t[(i, j)] * z[j];
        }
        let mut den = t[(i, i)] - lambda;
        if den.norm() < 1e-14 * scale {
            den = Complex64::new(1e-14 * scale, 0.0);
        }
        z[i] = -s / den;
    }
    z
}

fn correlation(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    a.dotc(b).norm() / (a.norm() * b.norm())
}

/// Complex eigenpair of `mode` (1-based, rigid-body modes excluded) by
/// fixed-point iteration on dense full-spectrum solves.
pub fn dense_fixed_point_eig(
    system: &AssembledSystem,
    chain: &MaxwellChain,
    mode: usize,
    settings: &SolverSettings,
) -> Result<ComplexEigenpair> {
    settings.validate()?;
    let n = system.size();
    if n > MAX_DENSE_DOFS {
        return Err(Error::InvalidParameter(format!(
            "dense oracle is limited to {MAX_DENSE_DOFS} DOFs, system has {n}"
        )));
    }
    let rigid = system.bc.map_or(3, |bc| bc.rigid_modes());
    let target = rigid + mode - 1;
    if mode == 0 || target >= n {
        return Err(Error::TooFewModes {
            requested: mode,
            found: n.saturating_sub(rigid),
        });
    }
    let k0 = system.k0.to_dense();
    let kc = system.kc.to_dense();
    let m = system.m.to_dense();
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("mass matrix is not positive definite".into()))?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Singular("Cholesky factor".into()))?;
    let linv_t = linv.transpose();
    let a0 = &linv * &k0 * &linv_t;
    let ac = &linv * &kc * &linv_t;

    let real = SymmetricEigen::new((&a0 + a0.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| real.eigenvalues[a].total_cmp(&real.eigenvalues[b]));
    let start_value = real.eigenvalues[order[target]];
    let start_shape: DVector<f64> = &linv_t * real.eigenvectors.column(order[target]);
    let start_norm = start_shape.norm();
    let start = RealEigenpair {
        omega0_squared: start_value,
        shape: start_shape.iter().map(|v| v / start_norm).collect(),
    };
    let phi0 = DVector::from_iterator(n, start.shape.iter().map(|&v| Complex64::new(v, 0.0)));

    let a0c = complex(&a0);
    let acc = complex(&ac);
    let linv_tc = complex(&linv_t);
    let mut omega_squared = Complex64::new(start_value, 0.0);
    let mut omega = omega_squared.sqrt();
    let mut shape = phi0.clone();
    let mut change = f64::INFINITY;
    for iteration in 1..=settings.max_iter {
        let g = chain.frequency_part(omega)?.value();
        let a = &a0c + &acc * g;
        let (q, t) = Schur::new(a).unpack();
        let mut near: Vec<usize> = (0..n).collect();
        near.sort_by(|&i, &j| {
            (t[(i, i)] - omega_squared)
                .norm()
                .total_cmp(&(t[(j, j)] - omega_squared).norm())
        });
        let mut best: Option<(f64, Complex64, DVector<Complex64>)> = None;
        for &k in near.iter().take(CANDIDATES) {
            let x = &linv_tc * (&q * triangular_eigenvector(&t, k));
            let c = correlation(&x, &shape);
            if best.as_ref().is_none_or(|b| c > b.0) {
                best = Some((c, t[(k, k)], x));
            }
        }
        let (corr, lambda, x) = best.expect("at least one candidate");
        if corr < TRACKING_THRESHOLD {
            return Err(Error::TrackingFailure {
                correlation: corr,
                threshold: TRACKING_THRESHOLD,
            });
        }
        // normalise like the Newton solver: φ0ᵀφ = φ0ᵀφ0
        let proj: Complex64 = phi0.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        shape = x * (Complex64::new(1.0, 0.0) / proj);
        let next = lambda.sqrt();
        change = (next - omega).norm() / next.norm();
        omega = next;
        omega_squared = lambda;
        if change < settings.tolerance {
            if !(omega_squared.re > 0.0) {
                return Err(Error::NonPhysical(format!(
                    "converged to Re[ω²] = {}",
                    omega_squared.re
                )));
            }
            let shape: Vec<Complex64> = shape.iter().copied().collect();
            let g = chain.frequency_part(omega)?.value();
            let r = system.dynamic_matrix(g, omega_squared).mul_vec(&shape);
            let residual = crate::eigen::norm_c(&r) / crate::eigen::norm_c(&shape) / residual_scale(system, &start);
            return Ok(ComplexEigenpair {
                omega,
                omega_squared,
                shape,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NotConverged {
        method: "dense fixed point",
        iterations: settings.max_iter,
        last_change: change,
    })
}
