//! Transmission and reflection over a k grid for the four built-in
//! deformations at the same reduced coupling.

use minlen_delta::bound::PotentialSpec;
use minlen_delta::deformation::DeformationSpec;
use minlen_delta::scattering::{g_closed_form, transmission_curve};

fn main() -> minlen_delta::Result<()> {
    let pot = PotentialSpec::from_reduced(0.5, 1.0, 1.0)?;
    let specs = [
        DeformationSpec::undeformed(),
        DeformationSpec::cutoff(10.0)?,
        DeformationSpec::kempf(1.0)?,
        DeformationSpec::max_momentum(1.0)?,
    ];
    for d in &specs {
        let top = d.a().min(4.0) * 0.98;
        let ks: Vec<f64> = (1..=8).map(|i| top * i as f64 / 8.0).collect();
        println!("{} (Ṽ0 = {})", d.kind(), pot.vtilde());
        println!(
            "  {:>8} {:>14} {:>14} {:>12} {:>12} {:>10}",
            "k", "G", "G closed", "T", "R", "T+R-1"
        );
        for p in transmission_curve(d, &pot, &ks, 1)? {
            println!(
                "  {:>8.4} {:>14.10} {:>14.10} {:>12.8} {:>12.8} {:>10.1e}",
                p.k,
                p.g_pv,
                g_closed_form(d, p.k).unwrap_or(f64::NAN),
                p.transmission,
                p.reflection,
                p.transmission + p.reflection - 1.0
            );
        }
    }
    Ok(())
}
