//! Perfect-reflection momenta k*(Ṽ0). For Kempf the curve is √((πṼ0√β − 1)/β);
//! for the cutoff it creeps up to the band edge at weak coupling.

use std::f64::consts::PI;

use minlen_delta::deformation::DeformationSpec;
use minlen_delta::scattering::resonance_curve;

fn main() -> minlen_delta::Result<()> {
    let couplings: Vec<f64> = (1..=10).map(|i| 0.25 * i as f64).collect();

    let kempf = DeformationSpec::kempf(1.0)?;
    let curve = resonance_curve(&kempf, &couplings, 20.0, 2)?;
    println!("kempf beta=1");
    for p in &curve.points {
        println!(
            "  Ṽ0 = {:5.2}  k* = {:.12}  closed form {:.12}",
            p.vtilde,
            p.k_star,
            (PI * p.vtilde - 1.0).sqrt()
        );
    }

    let cutoff = DeformationSpec::cutoff(10.0)?;
    let weak = [1.0 / PI, 0.5, 1.0, 2.0, 4.0, 4.9, 5.1];
    let curve = resonance_curve(&cutoff, &weak, 10.0, 2)?;
    println!("\ncutoff b=10 (no resonance once Ṽ0 >= b/2)");
    for p in &curve.points {
        println!(
            "  Ṽ0 = {:7.4}  k* = {:.15}  b - k* = {:.3e}",
            p.vtilde, p.k_star, p.edge_gap
        );
    }

    let mm = DeformationSpec::max_momentum(1.0)?;
    let curve = resonance_curve(&mm, &couplings, 0.999, 1)?;
    println!(
        "\nmaximal momentum: {} interior resonances",
        curve.points.len()
    );
    Ok(())
}
