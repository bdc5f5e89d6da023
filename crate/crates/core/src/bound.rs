//! The bound state of the projector delta well `V = −V0·δ̃(x)·P0`, where
//! `P0ψ = ψ(0)`.
//!
//! In momentum space the Schrödinger equation reads
//! `(g²(p) + q²)φ(p) = Ṽ0 ∫ φ dp` with `q = √(−2mE)` and `Ṽ0 = mV0/(πħ)`, so
//! `φ ∝ 1/(g² + q²)` and the energy follows from
//! `1 = Ṽ0 ∫_{-b}^{b} dp/(g²(p) + q²)`. The left side is strictly decreasing
//! in `q`, hence there is exactly one level.
//!
//! A bare `−V0·δ(x)` is deliberately not offered. On band-limited
//! wavefunctions the kinetic term only produces momenta inside `[-b, b]`
//! while `δ(x)ψ(0)` has a flat spectrum over all momenta; matching the
//! Fourier components outside the band forces `ψ(0) = 0` and then `C(p) = 0`,
//! i.e. only the trivial solution exists.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::deformation::{DeformationKind, DeformationSpec};
use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, Integrator};

/// Absolute tolerance for the momentum-space integrals of this module.
pub const SPECTRAL_TOL: f64 = 1e-13;
const MAX_BRACKET_EXPANSIONS: usize = 60;

/// Coupling and unit constants of the delta well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    v0: f64,
    hbar: f64,
    m: f64,
}

impl PotentialSpec {
    pub fn new(v0: f64, hbar: f64, m: f64) -> Result<Self> {
        for (name, v) in [("v0", v0), ("hbar", hbar), ("mass", m)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        Ok(Self { v0, hbar, m })
    }

    /// Potential whose reduced coupling equals `vtilde`.
    pub fn from_reduced(vtilde: f64, hbar: f64, m: f64) -> Result<Self> {
        Self::new(vtilde * PI * hbar / m, hbar, m)
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    /// `Ṽ0 = m·V0/(π·ħ)`.
    pub fn vtilde(&self) -> f64 {
        self.m * self.v0 / (PI * self.hbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// Decay momentum `√(−2mE)`.
    pub q: f64,
    pub energy: f64,
    /// `∫ dp/(g² + q²)²`.
    pub i2: f64,
    /// `1/√(2πħ·i2)`.
    pub norm_const: f64,
}

fn integrator() -> Integrator {
    Integrator {
        abs_tol: SPECTRAL_TOL,
        rel_tol: 1e-13,
        ..Integrator::default()
    }
}

/// `∫_{-b}^{b} h(g(p)) dp` for even `h`, with `scale` setting the tangent map
/// on an unbounded band.
fn band_integral<H: Fn(f64) -> f64>(d: &DeformationSpec, scale: f64, h: H) -> Result<f64> {
    let half = integrator()
        .map_scale(scale)
        .integrate(|p| h(d.g_raw(p)), 0.0, d.b())?;
    Ok(2.0 * half.value)
}

/// `F(q) = Ṽ0 ∫ dp/(g² + q²) − 1`; its zero is the bound state.
pub fn spectral_function(d: &DeformationSpec, pot: &PotentialSpec, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::InvalidParameter {
            name: "q",
            reason: format!("must be > 0, got {q}"),
        });
    }
    let integral = band_integral(d, q, |g| 1.0 / (g * g + q * q))?;
    Ok(pot.vtilde() * integral - 1.0)
}

/// Finds the single root of [`spectral_function`], expanding the initial
/// bracket `[q0/10, 10·q0]` (`q0 = mV0/ħ`) by doubling as needed.
pub fn solve_bound_state(d: &DeformationSpec, pot: &PotentialSpec) -> Result<BoundState> {
    let q0 = pot.mass() * pot.v0() / pot.hbar();
    let (mut lo, mut hi) = (q0 / 10.0, 10.0 * q0);
    let mut expansions = 0;
    while spectral_function(d, pot, lo)? <= 0.0 {
        lo /= 2.0;
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Err(Error::BracketFailure { expansions });
        }
    }
    while spectral_function(d, pot, hi)? >= 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Err(Error::BracketFailure { expansions });
        }
    }

    // The closure cannot return a Result; remember the first failure instead.
    let mut failure = None;
    let q = find_root_bracketed(
        |q| match spectral_function(d, pot, q) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-14 * q0,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let q = q?;
    bound_state_at(d, pot, q)
}

/// Assembles the normalization data for a given decay momentum.
pub fn bound_state_at(d: &DeformationSpec, pot: &PotentialSpec, q: f64) -> Result<BoundState> {
    let i2 = band_integral(d, q, |g| {
        let h = 1.0 / (g * g + q * q);
        h * h
    })?;
    Ok(BoundState {
        q,
        energy: -q * q / (2.0 * pot.mass()),
        i2,
        norm_const: 1.0 / (2.0 * PI * pot.hbar() * i2).sqrt(),
    })
}

/// Decay momentum of the Kempf bound state, `√β q² + q − πṼ0 = 0`, written in
/// the cancellation-free form `q = 2πṼ0/(1 + √(1 + 4πṼ0√β))`.
pub fn kempf_bound_q(beta: f64, pot: &PotentialSpec) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be > 0, got {beta}"),
        });
    }
    let c = PI * pot.vtilde() * beta.sqrt();
    Ok(2.0 * PI * pot.vtilde() / (1.0 + (1.0 + 4.0 * c).sqrt()))
}

/// `E = −(1 + 2πṼ0√β − √(1 + 4πṼ0√β))/(4mβ)`.
pub fn kempf_bound_energy(beta: f64, pot: &PotentialSpec) -> Result<f64> {
    let q = kempf_bound_q(beta, pot)?;
    Ok(-q * q / (2.0 * pot.mass()))
}

/// Small-β expansion `−mV0²/(2ħ²) + m²V0³√β/ħ³ − 5m³V0⁴β/(2ħ⁴)`.
pub fn bound_energy_series(beta: f64, pot: &PotentialSpec) -> f64 {
    let (m, v, h) = (pot.mass(), pot.v0(), pot.hbar());
    -m * v * v / (2.0 * h * h) + m * m * v.powi(3) * beta.sqrt() / h.powi(3)
        - 5.0 * m.powi(3) * v.powi(4) * beta / (2.0 * h.powi(4))
}

/// Normalization prefactor convention for [`bound_wavefunction_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `1/√(2πħ·I2)`, unit norm for every deformation.
    #[default]
    Numeric,
    /// The Kempf-only printed prefactor
    /// `√(2/π)·(1 + √β q)·q^{3/2}/√(1 + 2√β q)`; it exceeds the unit-norm
    /// constant by `√(2π)` at `ħ = 1`.
    PrintedKempf,
}

/// `ψ(x) = N ∫_{-b}^{b} e^{ipx/ħ}/(g² + q²) dp`, real and even.
pub fn bound_wavefunction(
    d: &DeformationSpec,
    state: &BoundState,
    pot: &PotentialSpec,
    x: f64,
) -> Result<f64> {
    bound_wavefunction_with(d, state, pot, x, Normalization::Numeric)
}

pub fn bound_wavefunction_with(
    d: &DeformationSpec,
    state: &BoundState,
    pot: &PotentialSpec,
    x: f64,
    convention: Normalization,
) -> Result<f64> {
    let norm = match convention {
        Normalization::Numeric => state.norm_const,
        Normalization::PrintedKempf => printed_kempf_prefactor(d, state.q)?,
    };
    Ok(norm * cosine_transform(d, state.q, pot.hbar(), x)?)
}

fn printed_kempf_prefactor(d: &DeformationSpec, q: f64) -> Result<f64> {
    match (d.kind(), d.beta()) {
        (DeformationKind::Kempf, Some(beta)) => {
            let s = beta.sqrt() * q;
            Ok((2.0 / PI).sqrt() * (1.0 + s) * q.powf(1.5) / (1.0 + 2.0 * s).sqrt())
        }
        _ => Err(Error::InvalidParameter {
            name: "normalization",
            reason: "the printed prefactor exists only for the kempf deformation".into(),
        }),
    }
}

/// `∫_{-b}^{b} cos(px/ħ)/(g² + q²) dp`.
fn cosine_transform(d: &DeformationSpec, q: f64, hbar: f64, x: f64) -> Result<f64> {
    if !d.is_band_limited() {
        if d.kind() == DeformationKind::Undeformed {
            return Ok(PI / q * (-q * x.abs() / hbar).exp());
        }
        return Err(Error::InfiniteBand);
    }
    let b = d.b();
    let omega = x.abs() / hbar;
    let panels = (omega * b / (2.0 * PI)).ceil().max(1.0) as usize;
    let points: Vec<f64> = (1..panels).map(|i| b * i as f64 / panels as f64).collect();
    let half = Integrator::with_tol(1e-12).integrate_with_breakpoints(
        |p| {
            let g = d.g_raw(p);
            (omega * p).cos() / (g * g + q * q)
        },
        0.0,
        b,
        &points,
    )?;
    Ok(2.0 * half.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormCheck {
    /// `∫_{-L}^{L} |ψ|² dx` by quadrature.
    pub bulk: f64,
    /// Analytic estimate of `∫_{|x|>L} |ψ|² dx` from the leading large-`x`
    /// behaviour of `ψ`.
    pub tail: f64,
    pub total: f64,
}

/// Numerical `∫|ψ|² dx` over `[-half_width, half_width]` plus a tail estimate.
///
/// For a band edge where `1/(g² + q²)` stays finite (cutoff, maximal momentum)
/// `ψ(x) ≈ 2Nħ·h(b)·sin(bx/ħ)/x` at large `x`, which decays slowly enough that
/// the tail is kept explicitly.
pub fn normalization_check(
    d: &DeformationSpec,
    state: &BoundState,
    pot: &PotentialSpec,
    half_width: f64,
) -> Result<NormCheck> {
    let hbar = pot.hbar();
    let (q, n) = (state.q, state.norm_const);
    let period = if d.is_band_limited() {
        2.0 * PI * hbar / d.b()
    } else {
        hbar / q
    };
    let panels = (half_width / period).ceil().max(1.0) as usize;
    let points: Vec<f64> = (1..panels)
        .map(|i| half_width * i as f64 / panels as f64)
        .collect();

    let failure = RefCell::new(None);
    let half = Integrator::with_tol(1e-11).integrate_with_breakpoints(
        |x| match bound_wavefunction(d, state, pot, x) {
            Ok(v) => v * v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        half_width,
        &points,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let bulk = 2.0 * half.value;

    let tail = if d.is_band_limited() {
        let gb = d.g_raw(d.b());
        let hb = if gb.is_finite() {
            1.0 / (gb * gb + q * q)
        } else {
            0.0
        };
        let omega = d.b() / hbar;
        let l = half_width;
        8.0 * n
            * n
            * hbar
            * hbar
            * hb
            * hb
            * (0.5 / l + (2.0 * omega * l).sin() / (4.0 * omega * l * l))
    } else {
        // ψ = N(π/q)e^{−q|x|/ħ}
        let a = n * PI / q;
        a * a * hbar / q * (-2.0 * q * half_width / hbar).exp()
    };

    Ok(NormCheck {
        bulk,
        tail,
        total: bulk + tail,
    })
}
