//! Plane-wave flux, flux conservation across the well, and the
//! point-interaction correction j′ for the bound state.

use minlen_delta::bound::{bound_wavefunction, solve_bound_state, PotentialSpec};
use minlen_delta::deformation::DeformationSpec;
use minlen_delta::flux::{
    flux_conservation_check, plane_wave_flux, point_interaction_flux_correction,
};
use minlen_delta::quasiposition::SampledWavefunction;
use num_complex::Complex64;

fn main() -> minlen_delta::Result<()> {
    let pot = PotentialSpec::new(1.0, 1.0, 1.0)?;
    let kempf = DeformationSpec::kempf(1.0)?;
    let j = plane_wave_flux(
        &kempf,
        &pot,
        std::f64::consts::FRAC_PI_4,
        Complex64::new(1.0, 0.0),
    )?;
    println!("kempf plane-wave flux at p = π/4: {j}");

    // Ṽ0 = 1 puts a perfect-reflection point at k = √(π − 1)
    let strong = PotentialSpec::from_reduced(1.0, 1.0, 1.0)?;
    for k in [0.5, 1.0, (std::f64::consts::PI - 1.0).sqrt()] {
        let r = flux_conservation_check(&kempf, &strong, k)?;
        println!(
            "k = {k:.6}: j0 = {:.6}, jt = {:.3e}, jr = {:.6}, defect = {:.1e}",
            r.j_incident, r.j_transmitted, r.j_reflected, r.conservation_defect
        );
    }

    let d = DeformationSpec::cutoff(10.0)?;
    let state = solve_bound_state(&d, &pot)?;
    let half = 40.0 / state.q;
    let psi = SampledWavefunction::symmetric(half, 0.05, |x| {
        Complex64::new(
            bound_wavefunction(&d, &state, &pot, x).unwrap_or(f64::NAN),
            0.0,
        )
    })?;
    let psi0 = bound_wavefunction(&d, &state, &pot, 0.0)?;
    println!("\nj′(x) for the cutoff b=10 bound state");
    for x in [-5.0, -1.0, -0.1, 0.0, 0.1, 1.0, 5.0, half] {
        let est = point_interaction_flux_correction(&d, &pot, &psi, x)?;
        println!("  x = {x:>8.3}: j′ = {:.8}", est.value);
    }
    println!("  2·V0·ψ(0)² = {:.8}", 2.0 * pot.v0() * psi0 * psi0);
    Ok(())
}
