//! Probability currents.
//!
//! A plane wave `C·e^{ipx/ħ}` under the kinetic energy `g²(p)/(2m)` carries
//! `j = |C|²·∂ₚ(g²/2m) = |C|²·g·f(g)/m`. The point interaction adds the
//! correction `j′(x) = V0 ∫_{-∞}^{x} δ̃(x′)[ψ*(x′)ψ(0) + ψ*(0)ψ(x′)] dx′`.

use num_complex::Complex64;

use crate::bound::PotentialSpec;
use crate::deformation::DeformationSpec;
use crate::error::{Error, Result};
use crate::quasiposition::{
    project_bandlimited, tilde_delta, GridEstimate, KernelContext, SampledWavefunction,
    TruncationWarning,
};
use crate::scattering::scattering_point;

/// Relative size of `|ψ·δ̃|` at the grid start above which `j′` is flagged.
pub const FLUX_TRUNCATION_RATIO: f64 = 1e-8;

/// `|C|²·g(p)·f(g(p))/m`.
pub fn plane_wave_flux(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    p: f64,
    amplitude: Complex64,
) -> Result<f64> {
    let g = d.g(p)?;
    Ok(amplitude.norm_sqr() * g * d.f_raw(g) / pot.mass())
}

/// `j′(x)` by the trapezoid rule from the first grid node, with a linear
/// partial cell when `x` falls between nodes. `ψ(0)` is read from the grid
/// node at the origin, or reconstructed with the band-limited kernel.
pub fn point_interaction_flux_correction(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    psi: &SampledWavefunction,
    x: f64,
) -> Result<GridEstimate<f64>> {
    let ctx = KernelContext::new(d.clone(), pot.hbar())?;
    ctx.check_grid(psi)?;
    let (lo, hi) = (psi.x_min(), psi.x_max());
    if !(lo <= 0.0 && 0.0 <= hi) {
        return Err(Error::InvalidGrid(format!(
            "grid [{lo}, {hi}] must contain the origin"
        )));
    }
    if !(lo <= x && x <= hi) {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: format!("{x} lies outside the sampled range [{lo}, {hi}]"),
        });
    }
    let psi0 = match psi.node_at(0.0) {
        Some(i) => psi.values()[i],
        None => project_bandlimited(&ctx, psi, 0.0)?.value,
    };

    let mut density = Vec::with_capacity(psi.len());
    let mut weighted_peak = 0.0f64;
    for (xi, v) in psi.iter() {
        let kernel = tilde_delta(&ctx, xi)?;
        weighted_peak = weighted_peak.max((v * kernel).norm());
        density.push(kernel * 2.0 * (v.conj() * psi0).re);
    }

    let dx = psi.dx();
    let t = (x - lo) / dx;
    let last = (t.floor() as usize).min(psi.len() - 1);
    let mut sum = 0.0;
    for i in 0..last {
        sum += 0.5 * (density[i] + density[i + 1]) * dx;
    }
    let frac = t - last as f64;
    if frac > 0.0 && last + 1 < psi.len() {
        let end = density[last] + frac * (density[last + 1] - density[last]);
        sum += 0.5 * (density[last] + end) * frac * dx;
    }

    let edge = (psi.values()[0] * tilde_delta(&ctx, lo)?).norm();
    let truncation = (weighted_peak > 0.0 && edge > FLUX_TRUNCATION_RATIO * weighted_peak)
        .then_some(TruncationWarning {
            boundary_ratio: edge / weighted_peak,
        });
    Ok(GridEstimate {
        value: pot.v0() * sum,
        truncation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport {
    pub j_incident: f64,
    pub j_transmitted: f64,
    pub j_reflected: f64,
    /// `|j0 − jt − jr|/j0`.
    pub conservation_defect: f64,
}

/// Incident, transmitted and reflected flux of a unit plane wave at `k`.
pub fn flux_conservation_check(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    k: f64,
) -> Result<FluxReport> {
    let point = scattering_point(d, pot, k)?;
    let j0 = plane_wave_flux(d, pot, point.p0, Complex64::new(1.0, 0.0))?;
    let jt = point.transmission * j0;
    let jr = point.reflection * j0;
    Ok(FluxReport {
        j_incident: j0,
        j_transmitted: jt,
        j_reflected: jr,
        conservation_defect: (j0 - jt - jr).abs() / j0,
    })
}
