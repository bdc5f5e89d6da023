//! Kempf algebra: generic root finder against the closed form, and the
//! small-β expansion whose defect shrinks like β^{3/2}.

use minlen_delta::bound::{
    bound_energy_series, kempf_bound_energy, solve_bound_state, PotentialSpec,
};
use minlen_delta::deformation::DeformationSpec;

fn main() -> minlen_delta::Result<()> {
    let pot = PotentialSpec::new(1.0, 1.0, 1.0)?;

    println!(
        "{:>8} {:>20} {:>20} {:>10}",
        "beta", "E numeric", "E closed", "diff"
    );
    for beta in [1.0, 0.1, 0.01] {
        let numeric = solve_bound_state(&DeformationSpec::kempf(beta)?, &pot)?.energy;
        let closed = kempf_bound_energy(beta, &pot)?;
        println!(
            "{beta:>8} {numeric:>20.15} {closed:>20.15} {:>10.2e}",
            (numeric - closed).abs()
        );
    }

    println!("\n{:>8} {:>20} {:>12}", "beta", "series defect", "ratio");
    let mut previous: Option<f64> = None;
    for beta in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let defect = (bound_energy_series(beta, &pot) - kempf_bound_energy(beta, &pot)?).abs();
        match previous {
            Some(p) => println!("{beta:>8.0e} {defect:>20.6e} {:>12.2}", p / defect),
            None => println!("{beta:>8.0e} {defect:>20.6e}"),
        }
        previous = Some(defect);
    }
    // a factor 10 in beta is a factor 10^{3/2} ≈ 31.6 in the defect
    Ok(())
}
