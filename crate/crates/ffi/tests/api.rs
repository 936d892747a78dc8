use std::ffi::{CStr, CString};
use std::ptr;

use laminated_modal::effective::effective_modal;
use laminated_modal::eigen::{newton_solve, real_modes};
use laminated_modal::fem_beam::build_system;
use laminated_modal::materials::builtin_interlayer;
use laminated_modal::study::CaseSpec;
use laminated_modal::{BoundaryCondition, CrossSection, Method, SolverSettings};
use laminated_modal_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(
            lm_last_error_message(ptr::null_mut(), 0, &mut needed),
            LmStatus::BufferTooSmall
        );
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(
            lm_last_error_message(buf.as_mut_ptr(), buf.len(), &mut needed),
            LmStatus::Ok
        );
        CStr::from_ptr(buf.as_ptr()).to_str().unwrap().to_string()
    }
}

fn new_beam(bc: LmBoundary, material: &str, temperature: f64) -> *mut LmBeam {
    let name = CString::new(material).unwrap();
    let mut beam = ptr::null_mut();
    let status = unsafe {
        lm_beam_new(
            bc as u32,
            10.0,
            0.76,
            10.0,
            100.0,
            1.0,
            name.as_ptr(),
            temperature,
            &mut beam,
        )
    };
    assert_eq!(status, LmStatus::Ok, "{}", last_error());
    assert!(!beam.is_null());
    beam
}

fn options() -> LmSolverOptions {
    LmSolverOptions {
        elements: 40,
        ..lm_solver_options_default()
    }
}

#[test]
fn solve_matches_the_library() {
    let beam = new_beam(LmBoundary::ClampedClamped, "PVB_M", 25.0);
    let opts = options();
    let mut out = [LmModalResult::default(); 3];
    let mut written = 0;

    let spec = CaseSpec::new(
        BoundaryCondition::ClampedClamped,
        CrossSection::from_mm(10.0, 0.76, 10.0, 100.0).unwrap(),
        "PVB_M",
        25.0,
    );
    let reference = spec
        .beam(laminated_modal::materials::MaterialDatabase::builtin())
        .unwrap();
    let settings = SolverSettings::default();

    let status = unsafe { lm_beam_solve(beam, LmMethod::Cnm as u32, &opts, out.as_mut_ptr(), 3, &mut written) };
    assert_eq!(status, LmStatus::Ok);
    assert_eq!(written, 3);
    let system = build_system(&reference, 40).unwrap();
    let chain = reference.chain().unwrap();
    for (i, start) in real_modes(&system, 3, &settings).unwrap().iter().enumerate() {
        let p = newton_solve(&system, &chain, start, &settings).unwrap();
        let (f, eta) = p.frequency_and_loss().unwrap();
        assert_eq!(out[i].mode as usize, i + 1);
        assert_eq!(out[i].frequency_hz, f);
        assert_eq!(out[i].loss_factor, eta);
        assert_eq!((out[i].omega_re, out[i].omega_im), (p.omega.re, p.omega.im));
    }

    let status = unsafe {
        lm_beam_solve(
            beam,
            LmMethod::Eet as u32,
            ptr::null(),
            out.as_mut_ptr(),
            3,
            &mut written,
        )
    };
    assert_eq!(status, LmStatus::Ok);
    for (i, r) in out.iter().enumerate() {
        let e = effective_modal(&reference, Method::Eet, i + 1, &settings).unwrap();
        assert_eq!((r.frequency_hz, r.loss_factor), (e.frequency, e.loss_factor));
    }

    let status = unsafe { lm_beam_solve(beam, LmMethod::Mse as u32, &opts, out.as_mut_ptr(), 3, &mut written) };
    assert_eq!(status, LmStatus::Ok);
    assert!(out.iter().all(|r| r.omega_im == 0.0 && r.loss_factor > 0.0));
    unsafe { lm_beam_free(beam) };
}

#[test]
fn argument_errors_are_reported() {
    let beam = new_beam(LmBoundary::SimplySupported, "SGP_M", 25.0);
    let mut out = [LmModalResult::default(); 2];
    let mut written = 0;
    unsafe {
        let opts = options();
        assert_eq!(
            lm_beam_solve(beam, LmMethod::Det as u32, &opts, out.as_mut_ptr(), 2, &mut written),
            LmStatus::BufferTooSmall
        );
        assert_eq!(written, 3);
        assert_eq!(
            lm_beam_solve(beam, 9, &opts, out.as_mut_ptr(), 2, &mut written),
            LmStatus::InvalidArgument
        );
        assert!(last_error().contains("unknown method"));
        assert_eq!(
            lm_beam_solve(ptr::null(), 0, &opts, out.as_mut_ptr(), 2, &mut written),
            LmStatus::NullPointer
        );
        let bad = LmSolverOptions {
            tolerance: -1.0,
            ..opts
        };
        assert_eq!(
            lm_beam_solve(beam, LmMethod::Det as u32, &bad, out.as_mut_ptr(), 3, &mut written),
            LmStatus::InvalidArgument
        );
        let slow = LmSolverOptions {
            max_iter: 1,
            tolerance: 1e-15,
            modes: 1,
            ..opts
        };
        assert_eq!(
            lm_beam_solve(beam, LmMethod::Cnm as u32, &slow, out.as_mut_ptr(), 2, &mut written),
            LmStatus::SolverFailure
        );
        assert!(last_error().contains("converge"));
        lm_beam_free(beam);
        lm_beam_free(ptr::null_mut());

        let mut handle = ptr::null_mut();
        let name = CString::new("EVA").unwrap();
        assert_eq!(
            lm_beam_new(0, 10.0, 0.76, 10.0, 100.0, 1.0, name.as_ptr(), 25.0, &mut handle),
            LmStatus::UnknownMaterial
        );
        assert!(handle.is_null());
        assert!(last_error().contains("EVA"));
        let name = CString::new("PVB_M").unwrap();
        assert_eq!(
            lm_beam_new(5, 10.0, 0.76, 10.0, 100.0, 1.0, name.as_ptr(), 25.0, &mut handle),
            LmStatus::InvalidArgument
        );
        assert_eq!(
            lm_beam_new(0, -1.0, 0.76, 10.0, 100.0, 1.0, name.as_ptr(), 25.0, &mut handle),
            LmStatus::InvalidArgument
        );
        assert_eq!(
            lm_beam_new(0, 10.0, 0.76, 10.0, 100.0, 1.0, ptr::null(), 25.0, &mut handle),
            LmStatus::NullPointer
        );
    }
}

#[test]
fn success_clears_the_last_error() {
    let name = CString::new("nope").unwrap();
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            lm_complex_modulus(name.as_ptr(), 25.0, 10.0, &mut re, &mut im),
            LmStatus::UnknownMaterial
        );
        assert!(!last_error().is_empty());
        let name = CString::new("PVB_A").unwrap();
        assert_eq!(
            lm_complex_modulus(name.as_ptr(), 50.0, 10.0, &mut re, &mut im),
            LmStatus::Ok
        );
    }
    assert_eq!(last_error(), "");
    let g = builtin_interlayer("PVB_A")
        .unwrap()
        .chain_at(50.0)
        .unwrap()
        .complex_modulus(num_complex::Complex64::new(2.0 * std::f64::consts::PI * 10.0, 0.0))
        .unwrap()
        .value();
    assert_eq!((re, im), (g.re, g.im));
}

#[test]
fn version_is_the_package_version() {
    let v = unsafe { CStr::from_ptr(lm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn study_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"methods": ["cnm", "det"], "modes": 1, "elements": 20,
            "cases": [{"bc": "ss", "h1_mm": 10, "h2_mm": 0.76, "h3_mm": 10, "material": "TPU_M", "temp_c": 25}]}"#,
    )
    .unwrap();
    let cfg = CString::new(cfg.to_str().unwrap()).unwrap();
    let out = CString::new(dir.path().join("out").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { lm_run_study(cfg.as_ptr(), out.as_ptr()) }, LmStatus::Ok);
    let csv = std::fs::read_to_string(dir.path().join("out/cases.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    let missing = CString::new(dir.path().join("missing.json").to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { lm_run_study(missing.as_ptr(), out.as_ptr()) },
        LmStatus::InvalidArgument
    );
}
