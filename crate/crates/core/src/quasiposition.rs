//! Quasiposition representation: band-limited wavefunctions on a uniform
//! grid and the reproducing kernel `δ̃(x) = sin(bx/ħ)/(πx)`.
//!
//! Wavefunctions here are superpositions of plane waves `e^{ipx/ħ}/√(2πħ)`
//! with `|p| ≤ b`, so `δ̃` plays the role of the Dirac delta:
//! `∫ ψ(x') δ̃(x − x') dx' = ψ(x)`. Position eigenfunctions `√(2l0)·δ̃(x − λ)`
//! do not vanish at `p = ±b` in momentum space and are therefore not
//! physical states; [`physical_state_check`] reports exactly that boundary
//! amplitude.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::deformation::DeformationSpec;
use crate::error::{Error, Result};

/// Boundary-to-peak ratio above which a grid transform flags truncation.
pub const TRUNCATION_RATIO: f64 = 1e-6;

/// Relative level of `|C(±b)|` below which a state counts as physical.
pub const PHYSICAL_STATE_RATIO: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct KernelContext {
    d: DeformationSpec,
    hbar: f64,
}

impl KernelContext {
    pub fn new(d: DeformationSpec, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be > 0, got {hbar}"),
            });
        }
        Ok(Self { d, hbar })
    }

    pub fn deformation(&self) -> &DeformationSpec {
        &self.d
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Finite band half-width `b`.
    pub fn band(&self) -> Result<f64> {
        if self.d.is_band_limited() {
            Ok(self.d.b())
        } else {
            Err(Error::InfiniteBand)
        }
    }

    pub fn min_length(&self) -> f64 {
        self.d.min_length(self.hbar)
    }

    /// Quarter-Nyquist spacing `πħ/(4b)`.
    pub fn max_grid_spacing(&self) -> Result<f64> {
        Ok(PI * self.hbar / (4.0 * self.band()?))
    }

    /// Rejects grids coarser than [`Self::max_grid_spacing`]; returns `b`.
    pub fn check_grid(&self, psi: &SampledWavefunction) -> Result<f64> {
        let limit = self.max_grid_spacing()?;
        if psi.dx() > limit * (1.0 + 1e-12) {
            return Err(Error::GridTooCoarse {
                dx: psi.dx(),
                limit,
            });
        }
        self.band()
    }
}

/// Samples of `ψ` on a uniform, strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    x0: f64,
    dx: f64,
    values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn new(xs: &[f64], values: Vec<Complex64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "need at least two samples and matching lengths, got {} positions and {} values",
                xs.len(),
                values.len()
            )));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if !(dx > 0.0) {
            return Err(Error::InvalidGrid("positions must increase".into()));
        }
        for (i, &x) in xs.iter().enumerate() {
            let expected = xs[0] + dx * i as f64;
            if (x - expected).abs() > 1e-9 * dx.max(expected.abs()) {
                return Err(Error::InvalidGrid(format!(
                    "non-uniform spacing at index {i}"
                )));
            }
        }
        Ok(Self {
            x0: xs[0],
            dx,
            values,
        })
    }

    /// Uniform grid with `n` points on `[x_min, x_max]`.
    pub fn from_fn<F>(x_min: f64, x_max: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        if n < 2 || !(x_max > x_min) {
            return Err(Error::InvalidGrid(format!(
                "need n >= 2 and x_max > x_min, got n = {n}, [{x_min}, {x_max}]"
            )));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let values = (0..n).map(|i| f(x_min + dx * i as f64)).collect();
        Ok(Self {
            x0: x_min,
            dx,
            values,
        })
    }

    /// Grid symmetric about 0 with spacing at most `dx_max` covering `[-half, half]`.
    pub fn symmetric<F>(half: f64, dx_max: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let cells = (half / dx_max).ceil().max(1.0) as usize;
        Self::from_fn(-half, half, 2 * cells + 1, f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn x_min(&self) -> f64 {
        self.x0
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.x(i), v))
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Index of the node within `1e-9·dx` of `x`, if any.
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let t = (x - self.x0) / self.dx;
        let i = t.round();
        ((t - i).abs() < 1e-9 && i >= 0.0 && (i as usize) < self.len()).then_some(i as usize)
    }

    fn truncation(&self) -> Option<TruncationWarning> {
        let peak = self.peak();
        if peak == 0.0 {
            return None;
        }
        let edge = self.values[0]
            .norm()
            .max(self.values[self.len() - 1].norm());
        let ratio = edge / peak;
        (ratio > TRUNCATION_RATIO).then_some(TruncationWarning {
            boundary_ratio: ratio,
        })
    }

    /// Trapezoid sum `Σ wᵢ h(xᵢ, ψᵢ)·dx`.
    fn trapezoid<F>(&self, h: F) -> Complex64
    where
        F: Fn(f64, Complex64) -> Complex64,
    {
        let n = self.len();
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, (x, v)) in self.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            sum += h(x, v) * w;
        }
        sum * self.dx
    }
}

/// The samples do not decay to negligible size at the grid edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    /// `max(|ψ(x_min)|, |ψ(x_max)|) / max|ψ|`.
    pub boundary_ratio: f64,
}

/// A grid-based estimate plus a truncation flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEstimate<T> {
    pub value: T,
    pub truncation: Option<TruncationWarning>,
}

fn sinc_kernel(b: f64, hbar: f64, x: f64) -> f64 {
    let arg = b * x / hbar;
    if arg.abs() < 1e-8 {
        b / (PI * hbar) * (1.0 - arg * arg / 6.0)
    } else {
        arg.sin() / (PI * x)
    }
}

/// `δ̃(x) = sin(bx/ħ)/(πx)`, with the continuous value `b/(πħ)` at 0.
pub fn tilde_delta(ctx: &KernelContext, x: f64) -> Result<f64> {
    Ok(sinc_kernel(ctx.band()?, ctx.hbar, x))
}

/// Position eigenfunction `√(2l0)·δ̃(x − λ)`.
pub fn position_eigenfunction(ctx: &KernelContext, lambda: f64, x: f64) -> Result<f64> {
    let b = ctx.band()?;
    Ok((2.0 * ctx.min_length()).sqrt() * sinc_kernel(b, ctx.hbar, x - lambda))
}

/// `C(p) = ∫ ψ(x) e^{−ipx/ħ} dx / √(2πħ)` by the trapezoid rule.
pub fn momentum_amplitude(
    ctx: &KernelContext,
    psi: &SampledWavefunction,
    p: f64,
) -> Result<GridEstimate<Complex64>> {
    let b = ctx.check_grid(psi)?;
    if p.abs() > b {
        return Err(Error::Domain {
            what: "momentum amplitude",
            value: p,
            bound: b,
        });
    }
    let hbar = ctx.hbar;
    let norm = 1.0 / (2.0 * PI * hbar).sqrt();
    let value = psi.trapezoid(|x, v| v * Complex64::new(0.0, -p * x / hbar).exp()) * norm;
    Ok(GridEstimate {
        value,
        truncation: psi.truncation(),
    })
}

/// `∫ ψ(x') δ̃(x − x') dx'` on the grid; reproduces band-limited `ψ`.
pub fn project_bandlimited(
    ctx: &KernelContext,
    psi: &SampledWavefunction,
    x: f64,
) -> Result<GridEstimate<Complex64>> {
    let b = ctx.check_grid(psi)?;
    let hbar = ctx.hbar;
    let value = psi.trapezoid(|xp, v| v * sinc_kernel(b, hbar, x - xp));
    Ok(GridEstimate {
        value,
        truncation: psi.truncation(),
    })
}

/// Projection evaluated at every node of the input grid.
pub fn project_grid(ctx: &KernelContext, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    ctx.check_grid(psi)?;
    let values = (0..psi.len())
        .map(|i| project_bandlimited(ctx, psi, psi.x(i)).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledWavefunction {
        x0: psi.x0,
        dx: psi.dx,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalStateReport {
    pub c_plus: f64,
    pub c_minus: f64,
    pub c_max: f64,
    pub passed: bool,
}

/// Checks `C(±b) = 0`, the finite-kinetic-energy condition, relative to the
/// largest `|C(p)|` on a 201-point momentum grid.
pub fn physical_state_check(
    ctx: &KernelContext,
    psi: &SampledWavefunction,
) -> Result<PhysicalStateReport> {
    let b = ctx.check_grid(psi)?;
    let c_plus = momentum_amplitude(ctx, psi, b)?.value.norm();
    let c_minus = momentum_amplitude(ctx, psi, -b)?.value.norm();
    let mut c_max = c_plus.max(c_minus);
    for i in 0..=200 {
        let p = -b + 2.0 * b * i as f64 / 200.0;
        c_max = c_max.max(momentum_amplitude(ctx, psi, p)?.value.norm());
    }
    let passed = c_max == 0.0
        || (c_plus <= PHYSICAL_STATE_RATIO * c_max && c_minus <= PHYSICAL_STATE_RATIO * c_max);
    Ok(PhysicalStateReport {
        c_plus,
        c_minus,
        c_max,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ctx(b: f64) -> KernelContext {
        KernelContext::new(DeformationSpec::cutoff(b).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn kernel_values() {
        let c = ctx(1.0);
        assert_abs_diff_eq!(tilde_delta(&c, 0.0).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(tilde_delta(&c, 1e-12).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(tilde_delta(&c, PI).unwrap(), 0.0, epsilon = 1e-15);
        let c10 = ctx(10.0);
        assert_abs_diff_eq!(
            tilde_delta(&c10, 0.1).unwrap(),
            2.678_485_334_011_638,
            epsilon = 1e-12
        );
        assert_eq!(
            tilde_delta(&c10, 0.37).unwrap(),
            tilde_delta(&c10, -0.37).unwrap()
        );
        let ratio = tilde_delta(&c10, 0.0).unwrap() / tilde_delta(&c, 0.0).unwrap();
        assert_abs_diff_eq!(ratio, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn infinite_band_rejected() {
        let c = KernelContext::new(DeformationSpec::undeformed(), 1.0).unwrap();
        assert!(matches!(tilde_delta(&c, 0.0), Err(Error::InfiniteBand)));
        assert!(position_eigenfunction(&c, 0.0, 0.0).is_err());
    }

    #[test]
    fn eigenfunction_values() {
        let c = ctx(PI / 2.0);
        assert_abs_diff_eq!(c.min_length(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            position_eigenfunction(&c, 0.0, 0.0).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        let l0 = c.min_length();
        for n in [-3, -1, 1, 2, 5] {
            let v = position_eigenfunction(&c, 3.0, 3.0 + 2.0 * l0 * n as f64).unwrap();
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        }
        let a = position_eigenfunction(&c, 3.0, 3.4).unwrap();
        let b = position_eigenfunction(&c, 3.0, 2.6).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-14);
    }

    #[test]
    fn grid_validation() {
        assert!(SampledWavefunction::new(&[0.0], vec![Complex64::default()]).is_err());
        assert!(SampledWavefunction::new(&[0.0, 1.0, 3.0], vec![Complex64::default(); 3]).is_err());
        let c = ctx(10.0);
        let coarse =
            SampledWavefunction::from_fn(-10.0, 10.0, 21, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            momentum_amplitude(&c, &coarse, 0.0),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn kernel_integrates_to_one() {
        let c = ctx(3.0);
        let r = 400.0 * c.min_length();
        let total = crate::numerics::Integrator::with_tol(1e-12)
            .integrate_with_breakpoints(
                |x| tilde_delta(&c, x).unwrap(),
                -r,
                r,
                &(1..400)
                    .map(|i| -r + 2.0 * r * i as f64 / 400.0)
                    .collect::<Vec<_>>(),
            )
            .unwrap()
            .value;
        assert!((0.99..=1.01).contains(&total), "{total}");
    }

    #[test]
    fn plane_wave_amplitude_peaks_at_its_momentum() {
        let c = ctx(5.0);
        let k = 2.0;
        let psi = SampledWavefunction::symmetric(60.0, c.max_grid_spacing().unwrap(), |x| {
            Complex64::new(0.0, k * x).exp() / (2.0 * PI).sqrt()
        })
        .unwrap();
        let at_k = momentum_amplitude(&c, &psi, k).unwrap();
        assert!(at_k.truncation.is_some());
        for p in [-3.0, 0.0, 1.0, 3.0, 4.5] {
            let other = momentum_amplitude(&c, &psi, p).unwrap().value.norm();
            assert!(other < 0.1 * at_k.value.norm());
        }
    }

    #[test]
    fn real_even_state_has_real_even_amplitude() {
        let c = ctx(5.0);
        let psi = SampledWavefunction::symmetric(12.0, c.max_grid_spacing().unwrap(), |x| {
            Complex64::new((-x * x / 2.0).exp(), 0.0)
        })
        .unwrap();
        for p in [0.3, 1.1, 2.7] {
            let plus = momentum_amplitude(&c, &psi, p).unwrap().value;
            let minus = momentum_amplitude(&c, &psi, -p).unwrap().value;
            assert!(plus.im.abs() < 1e-10);
            assert_abs_diff_eq!(plus.re, minus.re, epsilon = 1e-12);
            // Gaussian transform oracle
            assert_abs_diff_eq!(plus.re, (-p * p / 2.0).exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn position_eigenfunction_is_not_physical() {
        let c = ctx(PI / 2.0);
        let psi = SampledWavefunction::symmetric(400.0, c.max_grid_spacing().unwrap(), |x| {
            Complex64::new(position_eigenfunction(&c, 0.0, x).unwrap(), 0.0)
        })
        .unwrap();
        let r = physical_state_check(&c, &psi).unwrap();
        assert!(!r.passed);
        assert!(r.c_plus > 0.1 * r.c_max);
    }

    #[test]
    fn zero_function_is_physical() {
        let c = ctx(2.0);
        let psi = SampledWavefunction::symmetric(5.0, c.max_grid_spacing().unwrap(), |_| {
            Complex64::default()
        })
        .unwrap();
        assert!(physical_state_check(&c, &psi).unwrap().passed);
    }
}
