//! User-supplied deformations: a Kempf clone checked against the built-in,
//! and f(P) = √(1 + P²) with g = sinh, which has no minimal length.

use minlen_delta::bound::{solve_bound_state, PotentialSpec};
use minlen_delta::deformation::DeformationSpec;
use minlen_delta::scattering::{g_principal, transmission_reflection};

fn main() -> minlen_delta::Result<()> {
    let beta: f64 = 0.5;
    let s = beta.sqrt();
    let b = std::f64::consts::FRAC_PI_2 / s;
    let clone = DeformationSpec::custom(
        move |pp| 1.0 + beta * pp * pp,
        move |p| (s * p).tan() / s,
        move |pp| (s * pp).atan() / s,
        b,
        f64::INFINITY,
    )?;
    let builtin = DeformationSpec::kempf(beta)?;
    let pot = PotentialSpec::new(1.0, 1.0, 1.0)?;
    println!(
        "bound energy: custom {:.14}, built-in {:.14}",
        solve_bound_state(&clone, &pot)?.energy,
        solve_bound_state(&builtin, &pot)?.energy
    );
    println!(
        "G(1): custom {:.14}, built-in {:.14}",
        g_principal(&clone, 1.0)?,
        g_principal(&builtin, 1.0)?
    );

    let sinh = DeformationSpec::custom(
        |pp: f64| (1.0 + pp * pp).sqrt(),
        f64::sinh,
        f64::asinh,
        f64::INFINITY,
        f64::INFINITY,
    )?;
    println!("\nsinh deformation: report {}", sinh.consistency_check(101));
    println!(
        "  bound energy {:.12}",
        solve_bound_state(&sinh, &pot)?.energy
    );
    for k in [0.5, 1.0, 2.0] {
        let (t, r) = transmission_reflection(&sinh, &pot, k)?;
        println!(
            "  k = {k}: G = {:.10}, T = {t:.10}, R = {r:.10}",
            g_principal(&sinh, k)?
        );
    }

    // a g that does not solve g' = f(g) is rejected
    let bad = DeformationSpec::custom(|_| 2.0, |p| p, |pp| pp, 1.0, 1.0);
    println!("\ninconsistent pair: {}", bad.unwrap_err());
    Ok(())
}
