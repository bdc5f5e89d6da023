//! The δ̃ kernel reproduces band-limited functions and filters out
//! momenta beyond the band.

use minlen_delta::deformation::DeformationSpec;
use minlen_delta::quasiposition::{
    project_bandlimited, tilde_delta, KernelContext, SampledWavefunction,
};
use num_complex::Complex64;

fn main() -> minlen_delta::Result<()> {
    let b = 4.0;
    let ctx = KernelContext::new(DeformationSpec::cutoff(b)?, 1.0)?;
    println!(
        "l0 = {:.6}, max grid spacing = {:.6}",
        ctx.min_length(),
        ctx.max_grid_spacing()?
    );
    println!("δ̃(0) = {:.6} = b/π", tilde_delta(&ctx, 0.0)?);

    let dx = ctx.max_grid_spacing()?;
    // a narrow-spectrum Gaussian sits well inside the band
    let inside =
        SampledWavefunction::symmetric(60.0, dx, |x| Complex64::new((-x * x / 8.0).exp(), 0.0))?;
    for x in [0.0, 0.7, 2.3] {
        let back = project_bandlimited(&ctx, &inside, x)?.value.re;
        println!(
            "in band:  ψ({x}) = {:.10}, projected = {:.10}",
            (-x * x / 8.0_f64).exp(),
            back
        );
    }

    let p = 2.0 * b;
    let outside = SampledWavefunction::symmetric(60.0, dx / 4.0, |x| {
        Complex64::new(0.0, p * x).exp() * (-x * x / 800.0).exp()
    })?;
    let peak = outside.peak();
    let leak = project_bandlimited(&ctx, &outside, 0.0)?.value.norm();
    println!("plane wave at p = 2b: projected/peak = {:.2e}", leak / peak);
    Ok(())
}
