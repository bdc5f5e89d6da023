//! Scattering of a plane wave `φ(p) = δ(p − p0)` with `g(p0) = k` on the
//! projector delta well.
//!
//! The kernel is `I(k) = ∫ dp/(g² − k² − i0) = G(k) + iπ/(k·f(k))` with the
//! real part `G` a principal value, and the outgoing amplitude is
//! `A = −Ṽ0/(1 + Ṽ0·I)`. Perfect reflection happens where `1 + Ṽ0·G = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bound::PotentialSpec;
use crate::deformation::{DeformationKind, DeformationSpec};
use crate::error::{Error, Result};
use crate::numerics::{
    find_root_bracketed, ordered_map, oscillatory_integral_damped, Integrator, DEFAULT_EPS_SCHEDULE,
};

/// Absolute tolerance for `G(k)`.
pub const SCATTERING_TOL: f64 = 1e-12;
/// `g_principal` refuses poles closer than `EDGE_GUARD·b` to the band edge.
pub const EDGE_GUARD: f64 = 1e-8;
/// Allowed disagreement between closed-form and amplitude-derived `T`, `R`.
pub const COEFFICIENT_TOL: f64 = 1e-12;
/// Points in the sign-change sweep of [`resonance_curve`].
pub const RESONANCE_SWEEP: usize = 512;
/// Bound on `|1 + Ṽ0·G(k*)|` at a reported resonance.
pub const RESONANCE_TOL: f64 = 1e-10;
/// Upper end of the edge sweep in `u = −ln(1 − p0/b)`; the pole then sits
/// about `1e-15·b` below the edge.
const U_MAX: f64 = 34.5;

fn integrator() -> Integrator {
    Integrator {
        abs_tol: SCATTERING_TOL,
        rel_tol: 1e-13,
        ..Integrator::default()
    }
}

/// The pole `p0 = g⁻¹(k)` together with its distance to the band edge, which
/// is carried separately so that it stays accurate when `p0` is within a few
/// ulps of `b`.
#[derive(Debug, Clone, Copy)]
struct Pole {
    k: f64,
    p0: f64,
    gap: f64,
}

impl Pole {
    fn from_k(d: &DeformationSpec, k: f64) -> Self {
        let p0 = d.g_inv_raw(k);
        Self {
            k,
            p0,
            gap: d.b() - p0,
        }
    }

    /// Finite bands only.
    fn from_u(d: &DeformationSpec, u: f64) -> Self {
        let b = d.b();
        let p0 = -b * (-u).exp_m1();
        Self {
            k: d.g_open(p0),
            p0,
            gap: b * (-u).exp(),
        }
    }

    fn u(&self, b: f64) -> f64 {
        -(-self.p0 / b).ln_1p()
    }
}

/// `PV ∫_{-b}^{b} dp/(g² − k²)`. The integrand is even, so only `[0, b]` is
/// integrated after removing `1/(kf)·p0/(p² − p0²)`; the removed part
/// integrates to `ln(gap/(b + p0))/(kf)`.
fn pv_core(d: &DeformationSpec, pole: Pole) -> Result<f64> {
    let Pole { k, p0, gap } = pole;
    let c2 = 1.0 / (k * d.f_raw(k));
    let smooth = |p: f64| {
        if p == p0 {
            return 0.0;
        }
        let g = d.g_open(p);
        1.0 / (d.g_difference(p, p0) * (g + k)) - c2 * p0 / ((p - p0) * (p + p0))
    };
    let b = d.b();
    let bulk = integrator()
        .map_scale(k)
        .integrate_with_breakpoints(smooth, 0.0, b, &[p0])?
        .value;
    let logs = if b.is_finite() {
        c2 * (gap / (b + p0)).ln()
    } else {
        0.0
    };
    Ok(2.0 * bulk + logs)
}

fn validate_k(d: &DeformationSpec, k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("must be finite and > 0, got {k}"),
        });
    }
    if !(k < d.a()) {
        return Err(Error::Domain {
            what: "incident momentum",
            value: k,
            bound: d.a(),
        });
    }
    Ok(())
}

fn guarded_pole(d: &DeformationSpec, k: f64) -> Result<Pole> {
    validate_k(d, k)?;
    let pole = Pole::from_k(d, k);
    let b = d.b();
    if b.is_finite() && !(pole.gap >= EDGE_GUARD * b) {
        return Err(Error::PoleAtBoundary {
            pole: pole.p0,
            lo: -b,
            hi: b,
        });
    }
    Ok(pole)
}

/// `G(k) = PV ∫_{-b}^{b} dp/(g²(p) − k²)`, with the poles `±p0` subtracted
/// (residues `±1/(2k·f(k))`).
pub fn g_principal(d: &DeformationSpec, k: f64) -> Result<f64> {
    pv_core(d, guarded_pole(d, k)?)
}

/// Closed forms of `G(k)` for the built-in deformations.
pub fn g_closed_form(d: &DeformationSpec, k: f64) -> Option<f64> {
    match d.kind() {
        DeformationKind::Undeformed | DeformationKind::MaxMomentum => Some(0.0),
        DeformationKind::Cutoff => {
            let b = d.b();
            Some(((b - k) / (b + k)).ln() / k)
        }
        DeformationKind::Kempf => {
            let beta = d.beta()?;
            Some(-PI * beta.sqrt() / (1.0 + beta * k * k))
        }
        DeformationKind::Custom => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringPoint {
    /// Incident momentum (a value of `g`).
    pub k: f64,
    /// Quasimomentum with `g(p0) = k`.
    pub p0: f64,
    /// Principal value `G(k)`.
    pub g_pv: f64,
    /// `I = G + iπ/(k·f(k))`.
    pub kernel: Complex64,
    pub amplitude: Complex64,
    pub transmission: f64,
    pub reflection: f64,
}

impl ScatteringPoint {
    /// `|T − |1 + s|²|` and `|R − |s|²|` with `s = iπA/(kf)`, whichever is
    /// larger.
    pub fn coefficient_defect(&self, d: &DeformationSpec) -> f64 {
        let s = Complex64::new(0.0, PI / (self.k * d.f_raw(self.k))) * self.amplitude;
        let t = (Complex64::new(1.0, 0.0) + s).norm_sqr();
        (self.transmission - t)
            .abs()
            .max((self.reflection - s.norm_sqr()).abs())
    }
}

fn assemble(d: &DeformationSpec, vt: f64, pole: Pole, g_pv: f64) -> ScatteringPoint {
    let k = pole.k;
    let kf = k * d.f_raw(k);
    let kernel = Complex64::new(g_pv, PI / kf);
    let amplitude = -vt / (1.0 + vt * kernel);
    let h = 1.0 + vt * g_pv;
    let open = (kf * h).powi(2);
    let closed = (PI * vt).powi(2);
    let denom = open + closed;
    ScatteringPoint {
        k,
        p0: pole.p0,
        g_pv,
        kernel,
        amplitude,
        transmission: open / denom,
        reflection: closed / denom,
    }
}

/// Full scattering data at `k`, with the coefficients cross-checked against
/// the amplitude.
pub fn scattering_point(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    k: f64,
) -> Result<ScatteringPoint> {
    let pole = guarded_pole(d, k)?;
    let point = assemble(d, pot.vtilde(), pole, pv_core(d, pole)?);
    let defect = point.coefficient_defect(d);
    if !(defect <= COEFFICIENT_TOL) {
        return Err(Error::Inconsistent { defect });
    }
    Ok(point)
}

/// `A = −Ṽ0/(1 + Ṽ0·I(k))`.
pub fn scattering_amplitude(d: &DeformationSpec, pot: &PotentialSpec, k: f64) -> Result<Complex64> {
    let pole = guarded_pole(d, k)?;
    Ok(assemble(d, pot.vtilde(), pole, pv_core(d, pole)?).amplitude)
}

/// Closed-form `(T, R)`, verified against `|1 + iπA/(kf)|²` and
/// `|iπA/(kf)|²`.
pub fn transmission_reflection(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    k: f64,
) -> Result<(f64, f64)> {
    let p = scattering_point(d, pot, k)?;
    Ok((p.transmission, p.reflection))
}

/// [`scattering_point`] over a grid of `k`, fanned out over `workers`
/// threads. Rows come back in input order.
pub fn transmission_curve(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    ks: &[f64],
    workers: usize,
) -> Result<Vec<ScatteringPoint>> {
    ordered_map(ks, workers, |&k| scattering_point(d, pot, k))
        .into_iter()
        .collect()
}

/// `e^{ip0·x/ħ} + (iπA/(kf))·e^{ip0·|x|/ħ}`, the wavefunction far from the
/// well.
pub fn scattering_wavefunction_far(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    k: f64,
    x: f64,
) -> Result<Complex64> {
    let pole = guarded_pole(d, k)?;
    let a = assemble(d, pot.vtilde(), pole, pv_core(d, pole)?).amplitude;
    let phase = pole.p0 / pot.hbar();
    let s = Complex64::new(0.0, PI / (k * d.f_raw(k))) * a;
    Ok(Complex64::new(0.0, phase * x).exp() + s * Complex64::new(0.0, phase * x.abs()).exp())
}

/// A perfect-reflection point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePoint {
    pub vtilde: f64,
    pub k_star: f64,
    /// `b − p0(k*)`, accurate even when `k*` rounds onto the band edge;
    /// infinite for an unbounded band.
    pub edge_gap: f64,
    /// `1 + Ṽ0·G(k*)`.
    pub residual: f64,
}

/// `h = 1 + Ṽ0·G` along the sweep variable: `u = −ln(1 − p0/b)` on a finite
/// band, `k` otherwise.
struct Detuning<'a> {
    d: &'a DeformationSpec,
}

impl Detuning<'_> {
    fn pole(&self, s: f64) -> Pole {
        if self.d.b().is_finite() {
            Pole::from_u(self.d, s)
        } else {
            Pole::from_k(self.d, s)
        }
    }

    fn coordinate(&self, pole: Pole) -> f64 {
        let b = self.d.b();
        if b.is_finite() {
            pole.u(b)
        } else {
            pole.k
        }
    }

    fn polish(&self, vt: f64, lo: f64, hi: f64) -> Result<ResonancePoint> {
        let mut failure = None;
        let s = find_root_bracketed(
            |s| match pv_core(self.d, self.pole(s)) {
                Ok(g) => 1.0 + vt * g,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            1e-15,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let pole = self.pole(s?);
        let residual = 1.0 + vt * pv_core(self.d, pole)?;
        if !(residual.abs() < RESONANCE_TOL) {
            return Err(Error::Inconsistent {
                defect: residual.abs(),
            });
        }
        Ok(ResonancePoint {
            vtilde: vt,
            k_star: pole.k,
            edge_gap: pole.gap,
            residual,
        })
    }
}

fn validate_vtilde(vt: f64) -> Result<()> {
    if !(vt > 0.0 && vt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "vtilde",
            reason: format!("must be finite and > 0, got {vt}"),
        });
    }
    Ok(())
}

/// Resolves the perfect-reflection momentum inside `[k_lo, k_hi]`, where
/// `1 + Ṽ0·G(k)` must change sign.
pub fn find_resonance(
    d: &DeformationSpec,
    pot: &PotentialSpec,
    k_lo: f64,
    k_hi: f64,
) -> Result<f64> {
    Ok(resonance_in(d, pot.vtilde(), k_lo, k_hi)?.k_star)
}

/// [`find_resonance`] returning the full [`ResonancePoint`].
pub fn resonance_in(d: &DeformationSpec, vt: f64, k_lo: f64, k_hi: f64) -> Result<ResonancePoint> {
    validate_vtilde(vt)?;
    validate_k(d, k_lo)?;
    validate_k(d, k_hi)?;
    if !(k_lo < k_hi) {
        return Err(Error::InvalidParameter {
            name: "bracket",
            reason: format!("need k_lo < k_hi, got [{k_lo}, {k_hi}]"),
        });
    }
    let det = Detuning { d };
    let (lo, hi) = (Pole::from_k(d, k_lo), Pole::from_k(d, k_hi));
    let f_lo = 1.0 + vt * pv_core(d, lo)?;
    let f_hi = 1.0 + vt * pv_core(d, hi)?;
    if f_lo == 0.0 {
        return det.polish(vt, det.coordinate(lo), det.coordinate(lo) * (1.0 + 1e-12));
    }
    if !(f_lo.signum() != f_hi.signum() || f_hi == 0.0) {
        return Err(Error::NoSignChange {
            lo: k_lo,
            hi: k_hi,
            f_lo,
            f_hi,
        });
    }
    det.polish(vt, det.coordinate(lo), det.coordinate(hi))
}

#[derive(Debug, Clone)]
pub struct ResonanceCurve {
    pub deformation: DeformationSpec,
    /// Sorted by coupling, then by `k*`.
    pub points: Vec<ResonancePoint>,
}

/// Sweep nodes as values of the detuning coordinate: a uniform grid in `k`
/// on `(0, min(k_max, a))`, extended by a uniform grid in `u` up to the band
/// edge when `k_max` reaches it.
fn sweep_nodes(d: &DeformationSpec, k_max: f64) -> Vec<Pole> {
    let a = d.a();
    let reaches_edge = k_max >= a;
    let k_top = k_max.min(a);
    let n = RESONANCE_SWEEP;
    let last = if reaches_edge { n - 1 } else { n };
    let mut nodes: Vec<Pole> = (1..=last)
        .map(|i| Pole::from_k(d, k_top * i as f64 / n as f64))
        .collect();
    let b = d.b();
    if reaches_edge && b.is_finite() {
        let u0 = nodes.last().map_or(0.0, |p| p.u(b));
        if u0 < U_MAX {
            nodes.extend((1..=n).map(|i| Pole::from_u(d, u0 + (U_MAX - u0) * i as f64 / n as f64)));
        }
    }
    nodes
}

/// Perfect-reflection momenta `k*(Ṽ0)` below `k_max` for each coupling.
/// Couplings without a resonance are left out.
pub fn resonance_curve(
    d: &DeformationSpec,
    vtildes: &[f64],
    k_max: f64,
    workers: usize,
) -> Result<ResonanceCurve> {
    for &vt in vtildes {
        validate_vtilde(vt)?;
    }
    if vtildes.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter {
            name: "vtildes",
            reason: "couplings must be sorted ascending".into(),
        });
    }
    if !(k_max > 0.0) {
        return Err(Error::InvalidParameter {
            name: "k_max",
            reason: format!("must be > 0, got {k_max}"),
        });
    }
    let nodes = sweep_nodes(d, k_max);
    let gs: Vec<f64> = ordered_map(&nodes, workers, |&p| pv_core(d, p))
        .into_iter()
        .collect::<Result<_>>()?;
    let det = Detuning { d };
    let coords: Vec<f64> = nodes.iter().map(|&p| det.coordinate(p)).collect();

    let per_coupling = ordered_map(vtildes, workers, |&vt| {
        let h: Vec<f64> = gs.iter().map(|g| 1.0 + vt * g).collect();
        let mut found = Vec::new();
        for i in 0..h.len().saturating_sub(1) {
            let (h0, h1) = (h[i], h[i + 1]);
            if !(h0.is_finite() && h1.is_finite()) {
                continue;
            }
            if h0 == 0.0 || (h0 * h1 < 0.0) {
                found.push(det.polish(vt, coords[i], coords[i + 1])?);
            }
        }
        Ok(found)
    });
    let mut points = Vec::new();
    for r in per_coupling {
        points.extend(r?);
    }
    Ok(ResonanceCurve {
        deformation: d.clone(),
        points,
    })
}

/// One row of [`asymptotic_wave_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSample {
    pub x: f64,
    /// Extrapolated `∫ e^{ipx/ħ}/(g² − k² − iε) dp`.
    pub integral: Complex64,
    /// `(iπ/(kf))·e^{ip0|x|/ħ}`.
    pub expected: Complex64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub k: f64,
    pub p0: f64,
    pub samples: Vec<AsymptoticSample>,
    /// Deviation at the largest `|x|` is below the one at the smallest.
    pub decreasing_overall: bool,
}

/// Compares the `ε → 0` limit of `∫_{-b}^{b} e^{ipx/ħ}/(g² − k² − iε) dp`
/// with its far-field form `(iπ/(kf))·e^{ip0|x|/ħ}` at each `x`.
///
/// The damping schedule shrinks with `|x|` so that the `e^{−ε|x|/(2kfħ)}`
/// decay it induces stays small enough to extrapolate away.
pub fn asymptotic_wave_check(
    d: &DeformationSpec,
    k: f64,
    xs: &[f64],
    hbar: f64,
) -> Result<AsymptoticReport> {
    asymptotic_wave_check_with(d, k, xs, hbar, 1e-10)
}

/// [`asymptotic_wave_check`] with an explicit quadrature tolerance.
pub fn asymptotic_wave_check_with(
    d: &DeformationSpec,
    k: f64,
    xs: &[f64],
    hbar: f64,
    tol: f64,
) -> Result<AsymptoticReport> {
    let b = d.b();
    if !b.is_finite() {
        return Err(Error::InfiniteBand);
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "hbar",
            reason: format!("must be finite and > 0, got {hbar}"),
        });
    }
    let pole = guarded_pole(d, k)?;
    let near = 10.0 * hbar / k;
    if let Some(&x) = xs.iter().find(|x| !(x.abs() >= near)) {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: format!("|x| must be at least 10ħ/k = {near}, got {x}"),
        });
    }
    let kf = k * d.f_raw(k);
    let weight = Complex64::new(0.0, PI / kf);
    let mut samples = Vec::with_capacity(xs.len());
    for &x in xs {
        let eps0 = (1e-2 * k * k).min(0.1 * kf * hbar / x.abs());
        let schedule: Vec<f64> = DEFAULT_EPS_SCHEDULE
            .iter()
            .map(|e| e / DEFAULT_EPS_SCHEDULE[0] * eps0)
            .collect();
        let r = oscillatory_integral_damped(
            |p, eps| {
                let gap = d.g_difference(p.abs(), pole.p0);
                Complex64::new(gap * (d.g_open(p.abs()) + k), -eps).inv()
            },
            -b,
            b,
            x / hbar,
            &schedule,
            &[-pole.p0, pole.p0],
            tol,
        )?;
        let expected = weight * Complex64::new(0.0, pole.p0 * x.abs() / hbar).exp();
        samples.push(AsymptoticSample {
            x,
            integral: r.value,
            expected,
            deviation: (r.value - expected).norm() / expected.norm(),
        });
    }
    let nearest = samples
        .iter()
        .min_by(|a, b| a.x.abs().total_cmp(&b.x.abs()));
    let farthest = samples
        .iter()
        .max_by(|a, b| a.x.abs().total_cmp(&b.x.abs()));
    let decreasing_overall = match (nearest, farthest) {
        (Some(n), Some(f)) => n.x.abs() == f.x.abs() || f.deviation < n.deviation,
        _ => true,
    };
    Ok(AsymptoticReport {
        k,
        p0: pole.p0,
        samples,
        decreasing_overall,
    })
}
