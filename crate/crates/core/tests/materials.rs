#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use laminated_modal::materials::{builtin_interlayer, MaterialDatabase, MaxwellChain, BUILTIN_INTERLAYERS};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn chain(name: &str) -> MaxwellChain {
    builtin_interlayer(name).unwrap().chain
}

// Reference values: 40-digit mpmath summation of the storage/loss series
// with the tabulated Prony data.
#[test]
fn complex_modulus_against_high_precision_sums() {
    let cases = [
        (
            "PVB_M",
            2.0 * PI * 100.0,
            -189_144_049.793_469_18,
            17_197_654.119_228_284,
        ),
        (
            "SGP_M",
            2.0 * PI * 50.0,
            -65_138_775.519_001_844,
            12_423_437.697_077_988,
        ),
        ("TPU_M", 2.0 * PI * 20.0, -86_213_559.716_186_03, 3_763_101.505_254_866),
    ];
    for (name, w, re, im) in cases {
        let fr = chain(name).frequency_part(Complex64::new(w, 0.0)).unwrap().value();
        assert!(rel(fr.re, re) < 1e-13, "{name}: {} vs {re}", fr.re);
        assert!(rel(fr.im, im) < 1e-13, "{name}: {} vs {im}", fr.im);
    }
    let g = chain("SGP_M")
        .complex_modulus(Complex64::new(2.0 * PI * 50.0, 0.0))
        .unwrap();
    assert!(rel(g.storage(), 208_938_459.480_998_16) < 1e-13);
    assert!(rel(g.loss(), 12_423_437.697_077_988) < 1e-13);
}

#[test]
fn shifted_chain_against_high_precision_sum() {
    let g = builtin_interlayer("PVB_A")
        .unwrap()
        .chain_at(50.0)
        .unwrap()
        .complex_modulus(Complex64::new(2.0 * PI * 10.0, 0.0))
        .unwrap();
    assert!(rel(g.storage(), 684_433.317_556_368_8) < 1e-12);
    assert!(rel(g.loss(), 142_142.050_291_486_67) < 1e-12);
}

#[test]
fn instantaneous_moduli() {
    assert!(rel(chain("PVB_S").instantaneous_modulus(), 311_361_900.0) < 1e-14);
    assert!(rel(chain("SGP_M").instantaneous_modulus(), 274.1e6) < 1e-3);
    assert_eq!(MaxwellChain::elastic(5.0).unwrap().instantaneous_modulus(), 5.0);
}

#[test]
fn real_axis_matches_storage_and_loss_decomposition() {
    for name in BUILTIN_INTERLAYERS {
        let ch = chain(name);
        let g0 = ch.instantaneous_modulus();
        for k in 0..40 {
            let w = 10f64.powf(-3.0 + 0.25 * k as f64);
            let g = ch.complex_modulus(Complex64::new(w, 0.0)).unwrap().value();
            let (mut storage, mut loss) = (g0, 0.0);
            for u in ch.units() {
                let wt = w * u.relaxation_time;
                storage -= u.shear_modulus / (1.0 + wt * wt);
                loss += u.shear_modulus * wt / (1.0 + wt * wt);
            }
            assert!((g.re - storage).abs() <= 1e-13 * g0, "{name} at {w}");
            assert!((g.im - loss).abs() <= 1e-13 * g0, "{name} at {w}");
        }
    }
}

#[test]
fn database_json_is_stable() {
    let db = MaterialDatabase::builtin();
    let text = db.to_json().unwrap();
    let back = MaterialDatabase::from_json(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    for name in BUILTIN_INTERLAYERS {
        assert_eq!(back.interlayer(name).unwrap(), db.interlayer(name).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn derivative_matches_central_differences(
        idx in 0usize..5,
        log_r in -2.0f64..5.0,
        phase in -0.7f64..0.7,
    ) {
        let ch = chain(BUILTIN_INTERLAYERS[idx]);
        let r = 10f64.powf(log_r);
        let w = Complex64::from_polar(r, phase);
        let h = 1e-6 * r;
        let numeric = (ch.frequency_part(w + h).unwrap().value() - ch.frequency_part(w - h).unwrap().value()) / (2.0 * h);
        let exact = ch.frequency_part_derivative(w).unwrap();
        prop_assert!((numeric - exact).norm() <= 1e-6 * exact.norm());
    }

    #[test]
    fn storage_positive_loss_nonnegative_and_monotone(idx in 0usize..5, log_w in -3.0f64..6.0, step in 1.0001f64..10.0) {
        let ch = chain(BUILTIN_INTERLAYERS[idx]);
        let w = 10f64.powf(log_w);
        let a = ch.complex_modulus(Complex64::new(w, 0.0)).unwrap();
        let b = ch.complex_modulus(Complex64::new(w * step, 0.0)).unwrap();
        prop_assert!(a.storage() > 0.0 && a.loss() >= 0.0);
        prop_assert!(b.storage() >= a.storage());
    }

    #[test]
    fn relaxation_modulus_is_nonincreasing(idx in 0usize..5, t in 0.0f64..1e6, dt in 0.0f64..1e3) {
        let ch = chain(BUILTIN_INTERLAYERS[idx]);
        prop_assert!(ch.relaxation_modulus(t + dt).unwrap() <= ch.relaxation_modulus(t).unwrap());
    }

    #[test]
    fn shift_scales_times_only(idx in 0usize..5, a in 1e-3f64..1e3) {
        let ch = chain(BUILTIN_INTERLAYERS[idx]);
        let s = ch.with_scaled_times(a).unwrap();
        // G*(ω) of the shifted chain equals G*(aω) of the original
        let w = Complex64::new(3.7, 0.0);
        let lhs = s.complex_modulus(w).unwrap().value();
        let rhs = ch.complex_modulus(w * a).unwrap().value();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * ch.instantaneous_modulus());
    }
}
