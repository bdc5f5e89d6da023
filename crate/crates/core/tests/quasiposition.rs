use minlen_delta::bound::{bound_wavefunction, solve_bound_state, PotentialSpec};
use minlen_delta::deformation::DeformationSpec;
use minlen_delta::quasiposition::{
    momentum_amplitude, physical_state_check, project_bandlimited, project_grid, KernelContext,
    SampledWavefunction,
};
use num_complex::Complex64;

type Shape = Box<dyn Fn(f64) -> Complex64>;

fn gauss(x: f64, s: f64) -> f64 {
    (-x * x / (2.0 * s * s)).exp()
}

fn cutoff_ctx(b: f64) -> KernelContext {
    KernelContext::new(DeformationSpec::cutoff(b).unwrap(), 1.0).unwrap()
}

#[test]
fn bandlimited_functions_are_reproduced() {
    let ctx = cutoff_ctx(4.0);
    let dx = ctx.max_grid_spacing().unwrap();
    let shapes: [(&str, Shape); 3] = [
        ("gauss", Box::new(|x| Complex64::new(gauss(x, 2.0), 0.0))),
        (
            "modulated",
            Box::new(|x| Complex64::new(0.0, 1.5 * x).exp() * gauss(x, 3.0)),
        ),
        ("odd", Box::new(|x| Complex64::new(x * gauss(x, 2.5), 0.0))),
    ];
    for (name, f) in &shapes {
        let psi = SampledWavefunction::symmetric(60.0, dx, f).unwrap();
        for i in 0..41 {
            let x = -10.0 + 0.5 * i as f64 + 0.013;
            let back = project_bandlimited(&ctx, &psi, x).unwrap();
            assert!(back.truncation.is_none(), "{name}");
            assert!((back.value - f(x)).norm() < 1e-6, "{name} x={x}");
        }
    }
}

#[test]
fn out_of_band_waves_are_suppressed() {
    let b = 4.0;
    let ctx = cutoff_ctx(b);
    let dx = ctx.max_grid_spacing().unwrap() / 4.0;
    for p in [1.5 * b, 2.0 * b, 3.0 * b] {
        let psi = SampledWavefunction::symmetric(80.0, dx, |x| {
            Complex64::new(0.0, p * x).exp() * gauss(x, 20.0)
        })
        .unwrap();
        for x in [-5.0, 0.0, 1.1, 6.4] {
            let v = project_bandlimited(&ctx, &psi, x).unwrap().value;
            assert!(v.norm() < 1e-2 * psi.peak(), "p={p} x={x}: {v}");
        }
    }
}

#[test]
fn projection_is_idempotent() {
    let ctx = cutoff_ctx(3.0);
    let dx = ctx.max_grid_spacing().unwrap() / 2.0;
    let psi = SampledWavefunction::symmetric(50.0, dx, |x| {
        // a step has content far outside the band
        let step = if x.abs() < 2.0 { 1.0 } else { 0.0 };
        Complex64::new(step * gauss(x, 8.0), 0.0)
    })
    .unwrap();
    let once = project_grid(&ctx, &psi).unwrap();
    let twice = project_grid(&ctx, &once).unwrap();
    let interior = once
        .iter()
        .zip(twice.values())
        .filter(|((x, _), _)| x.abs() < 10.0);
    for ((x, a), b) in interior {
        assert!((a - b).norm() < 1e-3, "x={x}: {a} vs {b}");
    }
    let moved = once
        .values()
        .iter()
        .zip(psi.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(moved > 0.1);
}

#[test]
fn bound_state_momentum_profile() {
    let d = DeformationSpec::kempf(1.0).unwrap();
    let pot = PotentialSpec::new(1.0, 1.0, 1.0).unwrap();
    let state = solve_bound_state(&d, &pot).unwrap();
    let ctx = KernelContext::new(d.clone(), 1.0).unwrap();
    let psi = SampledWavefunction::symmetric(150.0 / state.q, 0.1, |x| {
        Complex64::new(bound_wavefunction(&d, &state, &pot, x).unwrap(), 0.0)
    })
    .unwrap();
    let b = ctx.band().unwrap();
    let products: Vec<f64> = (0..21)
        .map(|i| {
            let p = -0.9 * b + 1.8 * b * i as f64 / 20.0;
            let g = d.g(p).unwrap();
            let c = momentum_amplitude(&ctx, &psi, p).unwrap().value;
            assert!(c.im.abs() < 1e-8 * c.re.abs());
            c.re * (g * g + state.q * state.q)
        })
        .collect();
    let mean = products.iter().sum::<f64>() / products.len() as f64;
    for v in &products {
        assert!((v - mean).abs() < 1e-4 * mean.abs(), "{v} vs {mean}");
    }
}

#[test]
fn kempf_bound_state_is_physical() {
    let d = DeformationSpec::kempf(0.01).unwrap();
    let pot = PotentialSpec::new(1.0, 1.0, 1.0).unwrap();
    let state = solve_bound_state(&d, &pot).unwrap();
    let ctx = KernelContext::new(d.clone(), 1.0).unwrap();
    let dx = ctx.max_grid_spacing().unwrap() / 2.0;
    let psi = SampledWavefunction::symmetric(100.0 / state.q, dx, |x| {
        Complex64::new(bound_wavefunction(&d, &state, &pot, x).unwrap(), 0.0)
    })
    .unwrap();
    let report = physical_state_check(&ctx, &psi).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn coarse_grids_are_rejected() {
    let ctx = cutoff_ctx(10.0);
    let dx = ctx.max_grid_spacing().unwrap();
    let psi = SampledWavefunction::symmetric(5.0, 3.0 * dx, |x| Complex64::new(gauss(x, 1.0), 0.0))
        .unwrap();
    assert!(project_bandlimited(&ctx, &psi, 0.0).is_err());
    let unbounded = KernelContext::new(DeformationSpec::undeformed(), 1.0).unwrap();
    assert!(unbounded.max_grid_spacing().is_err());
}
