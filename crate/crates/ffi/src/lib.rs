//! C interface to `laminated-modal`.
//!
//! Every fallible function returns an `LmStatus`; on failure a message is
//! kept per thread and can be read with `lm_last_error_message`. Beams are
//! opaque handles created by `lm_beam_new` and released by
//! `lm_beam_free`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use num_complex::Complex64;

use laminated_modal::effective::effective_modal;
use laminated_modal::eigen::{mse_solve, newton_solve, real_modes};
use laminated_modal::fem_beam::build_system;
use laminated_modal::materials::MaterialDatabase;
use laminated_modal::study::{emit, run_study, summarize, CaseSpec, StudyConfig};
use laminated_modal::{BoundaryCondition, CrossSection, Error, LaminatedBeam, Method, SolverSettings};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownMaterial = 3,
    SolverFailure = 4,
    BufferTooSmall = 5,
    Io = 6,
    Panic = 7,
}

/// Values accepted by the `method` argument of `lm_beam_solve`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmMethod {
    Cnm = 0,
    Mse = 1,
    Det = 2,
    Eet = 3,
}

/// Values accepted by the `bc` argument of `lm_beam_new`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmBoundary {
    SimplySupported = 0,
    ClampedClamped = 1,
    FreeFree = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmSolverOptions {
    pub tolerance: f64,
    pub max_iter: u32,
    /// Number of elastic modes to compute.
    pub modes: u32,
    /// Elements per layer (finite element methods only).
    pub elements: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LmModalResult {
    pub mode: u32,
    pub frequency_hz: f64,
    pub loss_factor: f64,
    pub iterations: u32,
    /// Converged angular frequency [rad/s]; real for MSE.
    pub omega_re: f64,
    pub omega_im: f64,
}

/// Opaque beam handle.
pub struct LmBeam {
    beam: LaminatedBeam,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(err: &Error) -> LmStatus {
    match err {
        Error::InvalidParameter(_) | Error::Config(_) => LmStatus::InvalidArgument,
        Error::UnknownMaterial(_) => LmStatus::UnknownMaterial,
        Error::Io(_) | Error::Serde(_) => LmStatus::Io,
        Error::Singular(_)
        | Error::NotConverged { .. }
        | Error::TrackingFailure { .. }
        | Error::NonPhysical(_)
        | Error::TooFewModes { .. } => LmStatus::SolverFailure,
    }
}

struct Failure(LmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(LmStatus::NullPointer, format!("`{name}` is null"))
}

fn invalid(message: String) -> Failure {
    Failure(LmStatus::InvalidArgument, message)
}

/// Run `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LmStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            LmStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("`{name}` is not valid UTF-8")))
}

fn boundary(bc: u32) -> Result<BoundaryCondition, Failure> {
    match bc {
        0 => Ok(BoundaryCondition::SimplySupported),
        1 => Ok(BoundaryCondition::ClampedClamped),
        2 => Ok(BoundaryCondition::FreeFree),
        _ => Err(invalid(format!("unknown boundary condition {bc}"))),
    }
}

fn method(m: u32) -> Result<Method, Failure> {
    match m {
        0 => Ok(Method::Cnm),
        1 => Ok(Method::Mse),
        2 => Ok(Method::Det),
        3 => Ok(Method::Eet),
        _ => Err(invalid(format!("unknown method {m}"))),
    }
}

/// Default options: tolerance 1e-5, 50 iterations, 3 modes, 200 elements.
#[no_mangle]
pub extern "C" fn lm_solver_options_default() -> LmSolverOptions {
    let s = SolverSettings::default();
    LmSolverOptions {
        tolerance: s.tolerance,
        max_iter: s.max_iter as u32,
        modes: s.modes as u32,
        elements: 200,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf`.
///
/// `*required` receives the message length including the terminating NUL
/// (1 when there is no error). Returns `BUFFER_TOO_SMALL` without writing
/// when `capacity` is insufficient; `buf` may be null in that case.
///
/// # Safety
/// `buf` must be valid for `capacity` bytes; `required` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn lm_last_error_message(buf: *mut c_char, capacity: usize, required: *mut usize) -> LmStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone()).unwrap_or_default();
    let bytes = message.as_bytes_with_nul();
    if !required.is_null() {
        *required = bytes.len();
    }
    if capacity < bytes.len() {
        return LmStatus::BufferTooSmall;
    }
    if buf.is_null() {
        return LmStatus::NullPointer;
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
    LmStatus::Ok
}

/// Create a beam from the built-in material database.
///
/// `bc` is an `LmBoundary` value; thicknesses and width in mm, length in
/// m, temperature in °C. Both plies use the built-in glass.
///
/// # Safety
/// `material` must be a NUL-terminated string; `out` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn lm_beam_new(
    bc: u32,
    h1_mm: f64,
    h2_mm: f64,
    h3_mm: f64,
    width_mm: f64,
    length_m: f64,
    material: *const c_char,
    temperature_c: f64,
    out: *mut *mut LmBeam,
) -> LmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let material = read_str(material, "material")?;
        let section = CrossSection::from_mm(h1_mm, h2_mm, h3_mm, width_mm)?;
        let mut spec = CaseSpec::new(boundary(bc)?, section, material, temperature_c);
        spec.length = length_m;
        let beam = spec.beam(MaterialDatabase::builtin())?;
        *out = Box::into_raw(Box::new(LmBeam { beam }));
        Ok(())
    })
}

/// Release a beam; null is ignored.
///
/// # Safety
/// `beam` must come from `lm_beam_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lm_beam_free(beam: *mut LmBeam) {
    if !beam.is_null() {
        drop(Box::from_raw(beam));
    }
}

fn solve(beam: &LaminatedBeam, method: Method, options: &LmSolverOptions) -> Result<Vec<LmModalResult>, Failure> {
    let settings = SolverSettings {
        tolerance: options.tolerance,
        max_iter: options.max_iter as usize,
        modes: options.modes as usize,
        rigid_mode_cutoff: None,
    };
    settings.validate()?;
    let row = |mode: usize, f: f64, eta: f64, iterations: usize, omega: Complex64| LmModalResult {
        mode: mode as u32,
        frequency_hz: f,
        loss_factor: eta,
        iterations: iterations as u32,
        omega_re: omega.re,
        omega_im: omega.im,
    };
    let mut rows = Vec::with_capacity(settings.modes);
    match method {
        Method::Cnm | Method::Mse => {
            let chain = beam.chain()?;
            let system = build_system(beam, options.elements as usize)?;
            for (i, start) in real_modes(&system, settings.modes, &settings)?.iter().enumerate() {
                if method == Method::Cnm {
                    let p = newton_solve(&system, &chain, start, &settings)?;
                    let (f, eta) = p.frequency_and_loss()?;
                    rows.push(row(i + 1, f, eta, p.iterations, p.omega));
                } else {
                    let r = mse_solve(&system, &chain, start, &settings)?;
                    let f = r.omega / (2.0 * std::f64::consts::PI);
                    rows.push(row(i + 1, f, r.loss_factor, r.iterations, Complex64::new(r.omega, 0.0)));
                }
            }
        }
        Method::Det | Method::Eet => {
            for mode in 1..=settings.modes {
                let r = effective_modal(beam, method, mode, &settings)?;
                rows.push(row(mode, r.frequency, r.loss_factor, r.iterations, r.omega));
            }
        }
    }
    Ok(rows)
}

/// Solve the first `options->modes` modes with `method` (an `LmMethod`
/// value). `options` may be null for the defaults. On success `*written`
/// results are stored in `out`; when `capacity` is too small nothing is
/// solved, `*written` receives the needed count and `BUFFER_TOO_SMALL` is
/// returned.
///
/// # Safety
/// `beam` must be a live handle; `out` must be valid for `capacity`
/// elements; `options` must be valid or null; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lm_beam_solve(
    beam: *const LmBeam,
    method: u32,
    options: *const LmSolverOptions,
    out: *mut LmModalResult,
    capacity: usize,
    written: *mut usize,
) -> LmStatus {
    guard(|| {
        let beam = beam.as_ref().ok_or_else(|| null("beam"))?;
        if written.is_null() {
            return Err(null("written"));
        }
        *written = 0;
        let options = options.as_ref().copied().unwrap_or_else(|| lm_solver_options_default());
        let m = self::method(method)?;
        if capacity < options.modes as usize {
            *written = options.modes as usize;
            return Err(Failure(
                LmStatus::BufferTooSmall,
                format!("{} results do not fit in {capacity}", options.modes),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let rows = solve(&beam.beam, m, &options)?;
        std::ptr::copy_nonoverlapping(rows.as_ptr(), out, rows.len());
        *written = rows.len();
        Ok(())
    })
}

/// Complex shear modulus [Pa] of a built-in interlayer at `frequency_hz`
/// and `temperature_c`.
///
/// # Safety
/// `material` must be a NUL-terminated string; `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lm_complex_modulus(
    material: *const c_char,
    temperature_c: f64,
    frequency_hz: f64,
    re: *mut f64,
    im: *mut f64,
) -> LmStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let name = read_str(material, "material")?;
        if !(frequency_hz >= 0.0 && frequency_hz.is_finite()) {
            return Err(invalid(format!(
                "frequency must be finite and non-negative, got {frequency_hz}"
            )));
        }
        let chain = MaterialDatabase::builtin().interlayer(name)?.chain_at(temperature_c)?;
        let omega = Complex64::new(2.0 * std::f64::consts::PI * frequency_hz, 0.0);
        let g = chain.complex_modulus(omega)?.value();
        *re = g.re;
        *im = g.im;
        Ok(())
    })
}

/// Run a study and write `cases.csv`, `summary.json` and `qq_mode1.csv`
/// into `out_dir`. A null `config_path` runs the built-in 63-case matrix.
///
/// # Safety
/// Both arguments must be NUL-terminated strings or (for `config_path`) null.
#[no_mangle]
pub unsafe extern "C" fn lm_run_study(config_path: *const c_char, out_dir: *const c_char) -> LmStatus {
    guard(|| {
        let out_dir = PathBuf::from(read_str(out_dir, "out_dir")?);
        let cfg = if config_path.is_null() {
            StudyConfig::default()
        } else {
            StudyConfig::load(&PathBuf::from(read_str(config_path, "config_path")?))?
        };
        let db = cfg.database()?;
        let options = cfg.options()?;
        let results = run_study(&cfg.cases()?, &db, &options)?;
        let stats = summarize(&results, &cfg.grouping())?;
        emit(&results, &stats, &options, &out_dir)?;
        Ok(())
    })
}
