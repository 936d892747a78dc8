//! Closed-form modal estimates through a complex effective thickness.
//!
//! The laminate is replaced by a monolithic beam of thickness `h_ef(ω)` and
//! the frequency follows from the fixed point
//!
//! ```text
//! ω² = β⁴ E1 h_ef³(ω) / (12 m̄),   m̄ = ρ1 h1 + ρ2 h2 + ρ3 h3
//! ```
//!
//! Two thickness models are provided: the dynamic effective thickness (DET)
//! and the enhanced effective thickness (EET). Both interpolate between the
//! layered limit `h1³ + h3³` and the monolithic limit `h1³ + h3³ + 12 I_s`
//! (per unit width, `I_s = h1 h3 d² / (h1 + h3)`, `d = h1/2 + h2 + h3/2`).

use num_complex::Complex64;

use crate::eigen::{freq_and_loss, Method, ModalResult, SolverSettings};
use crate::error::{Error, Result};
use crate::fem_beam::{BoundaryCondition, CrossSection, LaminatedBeam};
use crate::materials::MaxwellChain;

const PI: f64 = std::f64::consts::PI;

/// Dimensionless wavenumbers `β l` of the first three bending modes.
pub fn wavenumber_table(bc: BoundaryCondition) -> [f64; 3] {
    match bc {
        BoundaryCondition::SimplySupported => [PI, 2.0 * PI, 3.0 * PI],
        BoundaryCondition::ClampedClamped | BoundaryCondition::FreeFree => [4.7300, 7.8532, 10.996],
    }
}

/// Dimensionless shape coefficients `ψ l²` of the first three modes.
pub fn shape_coefficient_table(bc: BoundaryCondition) -> [f64; 3] {
    match bc {
        BoundaryCondition::SimplySupported => [PI * PI, 4.0 * PI * PI, 9.0 * PI * PI],
        BoundaryCondition::ClampedClamped => [40.7, 82.6, 148.0],
        BoundaryCondition::FreeFree => [10.1, 34.9, 78.2],
    }
}

fn table_entry(table: [f64; 3], mode: usize) -> Result<f64> {
    if !(1..=3).contains(&mode) {
        return Err(Error::InvalidParameter(format!(
            "closed-form coefficients exist for modes 1 to 3, got {mode}"
        )));
    }
    Ok(table[mode - 1])
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beam length must be positive, got {length}"
        )));
    }
    Ok(())
}

/// Wavenumber `β` [1/m] of `mode` (1-based) for a beam of length `length`.
pub fn wavenumber(bc: BoundaryCondition, mode: usize, length: f64) -> Result<f64> {
    check_length(length)?;
    Ok(table_entry(wavenumber_table(bc), mode)? / length)
}

/// Shape coefficient `ψ` [1/m²] of `mode` (1-based).
pub fn shape_coefficient(bc: BoundaryCondition, mode: usize, length: f64) -> Result<f64> {
    check_length(length)?;
    Ok(table_entry(shape_coefficient_table(bc), mode)? / (length * length))
}

/// Complex effective thickness [m].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveThickness {
    cubed: Complex64,
}

impl EffectiveThickness {
    fn from_cubed(cubed: Complex64) -> Self {
        Self { cubed }
    }

    /// Principal cube root of `h_ef³`.
    pub fn value(&self) -> Complex64 {
        self.cubed.cbrt()
    }

    /// `h_ef³`, the quantity entering the frequency.
    pub fn cubed(&self) -> Complex64 {
        self.cubed
    }
}

fn layered_cubed(s: &CrossSection) -> f64 {
    s.h1.powi(3) + s.h3.powi(3)
}

/// `12 I_s` per unit width.
fn twelve_is(s: &CrossSection) -> f64 {
    let d = s.ply_distance();
    12.0 * s.h1 * s.h3 * d * d / (s.h1 + s.h3)
}

/// Thickness of the two glass plies without shear coupling.
pub fn layered_limit(section: &CrossSection) -> f64 {
    layered_cubed(section).cbrt()
}

/// Thickness of the fully coupled (monolithic) section.
pub fn monolithic_limit(section: &CrossSection) -> f64 {
    (layered_cubed(section) + twelve_is(section)).cbrt()
}

/// DET thickness for a given shear parameter `g = G*/(E1 h3 h2 β²)`.
/// `g = 0` is the layered limit and an infinite `g` the monolithic one.
pub fn det_thickness_from_g(section: &CrossSection, g: Complex64) -> EffectiveThickness {
    let hl = layered_cubed(section);
    let (h1, h3) = (section.h1, section.h3);
    let y = twelve_is(section) / hl;
    // 1 / (1 + h1/(g (h1+h3))) rewritten so that g = 0 is not a division by zero
    let coupling = if g.is_infinite() {
        Complex64::new(1.0, 0.0)
    } else {
        let gh = g * (h1 + h3);
        gh / (gh + h1)
    };
    EffectiveThickness::from_cubed(hl * (1.0 + y * coupling))
}

fn check_det_inputs(section: &CrossSection, e1: f64, factor: f64, what: &str) -> Result<()> {
    if !(section.h2 > 0.0) {
        return Err(Error::InvalidParameter("interlayer thickness must be positive".into()));
    }
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive, got {factor}"
        )));
    }
    if !(e1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "glass modulus must be positive, got {e1}"
        )));
    }
    Ok(())
}

/// Dynamic effective thickness for interlayer modulus `g_star` and
/// wavenumber `beta` [1/m].
pub fn det_thickness(section: &CrossSection, e1: f64, g_star: Complex64, beta: f64) -> Result<EffectiveThickness> {
    check_det_inputs(section, e1, beta, "wavenumber")?;
    let g = g_star / (e1 * section.h3 * section.h2 * beta * beta);
    Ok(det_thickness_from_g(section, g))
}

/// EET thickness for a given shear cohesion coefficient `ζ`
/// (0 layered, 1 monolithic).
pub fn eet_thickness_from_zeta(section: &CrossSection, zeta: Complex64) -> EffectiveThickness {
    let hl = layered_cubed(section);
    let hm = hl + twelve_is(section);
    let one = Complex64::new(1.0, 0.0);
    EffectiveThickness::from_cubed(one / (zeta / hm + (one - zeta) / hl))
}

/// Shear cohesion coefficient `ζ = μ / (μ + c ψ)` with
/// `μ = G* b / (E1 h2)` and `c = (I1 + I3)/I_tot · A1 A3/(A1 + A3)`.
pub fn shear_cohesion(section: &CrossSection, e1: f64, g_star: Complex64, psi: f64) -> Result<Complex64> {
    check_det_inputs(section, e1, psi, "shape coefficient")?;
    let CrossSection { h1, h2, h3, b } = *section;
    let (a1, a3) = (b * h1, b * h3);
    let (i1, i3) = (b * h1.powi(3) / 12.0, b * h3.powi(3) / 12.0);
    let d = section.ply_distance();
    let a13 = a1 * a3 / (a1 + a3);
    let i_tot = i1 + i3 + a13 * d * d;
    let c = (i1 + i3) / i_tot * a13;
    let mu = g_star * b / (e1 * h2);
    let den = mu + c * psi;
    if den.norm() == 0.0 {
        return Err(Error::Singular("shear cohesion coefficient denominator".into()));
    }
    Ok(mu / den)
}

/// Enhanced effective thickness for interlayer modulus `g_star` and shape
/// coefficient `psi` [1/m²]. The section width enters `μ` and cancels.
pub fn eet_thickness(section: &CrossSection, e1: f64, g_star: Complex64, psi: f64) -> Result<EffectiveThickness> {
    let zeta = shear_cohesion(section, e1, g_star, psi)?;
    Ok(eet_thickness_from_zeta(section, zeta))
}

/// Converged fixed point of one effective-thickness estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSolution {
    pub result: ModalResult,
    pub thickness: EffectiveThickness,
    pub omega_squared: Complex64,
}

/// Frequency and loss factor of `mode` (1-based) by DET or EET.
pub fn effective_modal(
    beam: &LaminatedBeam,
    method: Method,
    mode: usize,
    settings: &SolverSettings,
) -> Result<ModalResult> {
    Ok(effective_solution(beam, &beam.chain()?, method, mode, settings)?.result)
}

/// As [`effective_modal`] with an explicit interlayer chain, also returning
/// the converged thickness.
pub fn effective_solution(
    beam: &LaminatedBeam,
    chain: &MaxwellChain,
    method: Method,
    mode: usize,
    settings: &SolverSettings,
) -> Result<EffectiveSolution> {
    settings.validate()?;
    if !beam.identical_glass() {
        return Err(Error::InvalidParameter(
            "effective thickness methods require identical glass plies".into(),
        ));
    }
    let section = &beam.section;
    let e1 = beam.glass1.young_modulus;
    let thickness: Box<dyn Fn(Complex64) -> Result<EffectiveThickness>> = match method {
        Method::Det => {
            let beta = wavenumber(beam.bc, mode, beam.length)?;
            Box::new(move |g| det_thickness(section, e1, g, beta))
        }
        Method::Eet => {
            let psi = shape_coefficient(beam.bc, mode, beam.length)?;
            Box::new(move |g| eet_thickness(section, e1, g, psi))
        }
        Method::Cnm | Method::Mse => {
            return Err(Error::InvalidParameter(format!(
                "`{method}` is not an effective thickness method"
            )))
        }
    };
    let beta = wavenumber(beam.bc, mode, beam.length)?;
    let factor = beta.powi(4) * e1 / (12.0 * beam.areal_mass());
    let omega_squared_of = |h: &EffectiveThickness| h.cubed() * factor;

    let start = thickness(Complex64::new(chain.long_term_modulus(), 0.0))?;
    let mut omega = omega_squared_of(&start).sqrt();
    let mut change = f64::INFINITY;
    for iteration in 1..=settings.max_iter {
        let g = chain.complex_modulus(omega)?.value();
        let h = thickness(g)?;
        let w2 = omega_squared_of(&h);
        let next = w2.sqrt();
        change = (next - omega).norm() / next.norm();
        omega = next;
        if change < settings.tolerance {
            let (f, eta) = freq_and_loss(w2)?;
            let g_final = chain.complex_modulus(omega)?.value();
            let residual = (omega_squared_of(&thickness(g_final)?) - w2).norm() / w2.norm();
            return Ok(EffectiveSolution {
                result: ModalResult {
                    mode_index: mode,
                    frequency: f,
                    loss_factor: eta,
                    method,
                    iterations: iteration,
                    residual,
                    omega,
                },
                thickness: h,
                omega_squared: w2,
            });
        }
    }
    Err(Error::NotConverged {
        method: method.label(),
        iterations: settings.max_iter,
        last_change: change,
    })
}
