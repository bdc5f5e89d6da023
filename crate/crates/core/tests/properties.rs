use std::f64::consts::PI;

use minlen_delta::bound::PotentialSpec;
use minlen_delta::deformation::DeformationSpec;
use minlen_delta::scattering::{g_closed_form, scattering_point};
use num_complex::Complex64;
use proptest::prelude::*;

fn deformation(kind: u8, scale: f64) -> DeformationSpec {
    match kind {
        0 => DeformationSpec::undeformed(),
        1 => DeformationSpec::cutoff(10.0 * scale).unwrap(),
        2 => DeformationSpec::kempf(scale).unwrap(),
        _ => DeformationSpec::max_momentum(scale).unwrap(),
    }
}

fn wave_number(d: &DeformationSpec, frac: f64) -> f64 {
    let top = if d.a().is_finite() { d.a() } else { 20.0 };
    top * frac
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transmission_and_reflection_sum_to_one(
        kind in 0u8..4,
        scale in 0.05f64..5.0,
        frac in 0.01f64..0.98,
        log_v in -3.0f64..2.0,
    ) {
        let d = deformation(kind, scale);
        let pot = PotentialSpec::from_reduced(10f64.powf(log_v), 1.0, 1.0).unwrap();
        let k = wave_number(&d, frac);
        let point = scattering_point(&d, &pot, k).unwrap();
        prop_assert!((0.0..=1.0).contains(&point.transmission));
        prop_assert!((point.transmission + point.reflection - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplitude_reproduces_transmission(
        kind in 0u8..4,
        scale in 0.05f64..5.0,
        frac in 0.01f64..0.98,
        log_v in -3.0f64..2.0,
    ) {
        let d = deformation(kind, scale);
        let pot = PotentialSpec::from_reduced(10f64.powf(log_v), 1.0, 1.0).unwrap();
        let k = wave_number(&d, frac);
        let point = scattering_point(&d, &pot, k).unwrap();
        let s = Complex64::new(0.0, PI / (k * d.f_raw(k))) * point.amplitude;
        prop_assert!((point.transmission - (1.0 + s).norm_sqr()).abs() < 1e-12);
        prop_assert!((point.reflection - s.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn principal_value_matches_closed_form(
        kind in 0u8..4,
        scale in 0.05f64..5.0,
        frac in 0.01f64..0.98,
    ) {
        let d = deformation(kind, scale);
        let pot = PotentialSpec::from_reduced(1.0, 1.0, 1.0).unwrap();
        let k = wave_number(&d, frac);
        let exact = g_closed_form(&d, k).unwrap();
        let point = scattering_point(&d, &pot, k).unwrap();
        prop_assert!((point.g_pv - exact).abs() < 1e-8 * exact.abs().max(1.0));
    }
}
