//! Bound level of the delta well for each built-in deformation, plus a few
//! samples of the normalized wavefunction.

use minlen_delta::bound::{
    bound_wavefunction, normalization_check, solve_bound_state, PotentialSpec,
};
use minlen_delta::deformation::DeformationSpec;

fn main() -> minlen_delta::Result<()> {
    let pot = PotentialSpec::new(1.0, 1.0, 1.0)?;
    let specs = [
        DeformationSpec::undeformed(),
        DeformationSpec::cutoff(1.0)?,
        DeformationSpec::cutoff(10.0)?,
        DeformationSpec::kempf(0.1)?,
        DeformationSpec::max_momentum(0.1)?,
    ];

    println!(
        "{:<12} {:>8} {:>14} {:>14} {:>10}",
        "deformation", "b", "q", "E", "psi(0)"
    );
    for d in &specs {
        let s = solve_bound_state(d, &pot)?;
        let psi0 = bound_wavefunction(d, &s, &pot, 0.0)?;
        println!(
            "{:<12} {:>8.3} {:>14.10} {:>14.10} {:>10.6}",
            d.kind().name(),
            d.b(),
            s.q,
            s.energy,
            psi0
        );
    }

    // the wider band gives the taller peak
    let d = DeformationSpec::cutoff(10.0)?;
    let s = solve_bound_state(&d, &pot)?;
    let norm = normalization_check(&d, &s, &pot, 40.0 / s.q)?;
    println!(
        "\ncutoff b=10: norm = {:.8} (tail {:.2e})",
        norm.total, norm.tail
    );
    for x in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let psi = bound_wavefunction(&d, &s, &pot, x)?;
        println!(
            "  psi({x:>4}) = {psi:.8}   e^(-q|x|) shape: {:.8}",
            s.norm_const * std::f64::consts::PI / s.q * (-s.q * x).exp()
        );
    }
    Ok(())
}
