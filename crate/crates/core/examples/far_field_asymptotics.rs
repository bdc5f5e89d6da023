//! The regularized kernel ∫ e^{ipx/ħ}/(g² − k² − iε) dp approaches
//! (iπ/(k f(k)))·e^{ip0|x|/ħ} far from the origin.

use minlen_delta::deformation::DeformationSpec;
use minlen_delta::scattering::asymptotic_wave_check;

fn main() -> minlen_delta::Result<()> {
    let xs = [20.0, 50.0, 100.0, 200.0, -100.0];
    for (label, d) in [
        ("kempf beta=1", DeformationSpec::kempf(1.0)?),
        ("cutoff b=50", DeformationSpec::cutoff(50.0)?),
    ] {
        let rep = asymptotic_wave_check(&d, 1.0, &xs, 1.0)?;
        println!("{label}: p0 = {:.10}", rep.p0);
        for s in &rep.samples {
            println!(
                "  x = {:>6}  integral = {:>24.10}  expected = {:>24.10}  deviation = {:.2e}",
                s.x, s.integral, s.expected, s.deviation
            );
        }
        println!("  decreasing: {}", rep.decreasing_overall);
    }
    Ok(())
}
