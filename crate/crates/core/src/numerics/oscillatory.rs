//! Oscillatory integrals with an `−iε` regularised denominator, extrapolated
//! to `ε → 0⁺`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::quadrature::Integrator;

/// Default damping schedule, in units of `k²` when used by the scattering
/// module.
pub const DEFAULT_EPS_SCHEDULE: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

#[derive(Debug, Clone, PartialEq)]
pub struct DampedIntegral {
    /// Extrapolated `ε → 0` value.
    pub value: Complex64,
    /// Raw integrals, one per schedule entry.
    pub per_eps: Vec<Complex64>,
    /// `|Tₙ − Tₙ₋₁|` along the diagonal of the extrapolation table.
    pub corrections: Vec<f64>,
}

/// Extrapolates `values[i] ≈ P(nodes[i])` to `P(0)` with Neville's scheme,
/// returning the diagonal `T₀, T₁, …` (the estimate using the first `n+1`
/// points).
pub fn neville_to_zero(nodes: &[f64], values: &[Complex64]) -> Vec<Complex64> {
    let n = nodes.len();
    let mut table = values.to_vec();
    let mut diagonal = vec![table[0]];
    // after pass m, table[i] holds the degree-m interpolant through nodes i..=i+m
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (nodes[i], nodes[i + m]);
            table[i] = (table[i + 1] * xi - table[i] * xj) / (xi - xj);
        }
        diagonal.push(table[0]);
    }
    diagonal
}

/// `∫_lo^hi e^{i·phase_rate·p} · integrand(p, ε) dp` for every `ε` in
/// `eps_schedule`, followed by polynomial extrapolation to `ε = 0`.
///
/// `integrand(p, ε)` supplies the non-oscillatory factor, typically
/// `1/(D(p) − iε)`. The interval is pre-split into panels no longer than one
/// oscillation period and at every entry of `breakpoints` (pole locations).
pub fn oscillatory_integral_damped<F>(
    integrand: F,
    lo: f64,
    hi: f64,
    phase_rate: f64,
    eps_schedule: &[f64],
    breakpoints: &[f64],
    tol: f64,
) -> Result<DampedIntegral>
where
    F: Fn(f64, f64) -> Complex64,
{
    if eps_schedule.len() < 2
        || eps_schedule.iter().any(|&e| !(e > 0.0))
        || eps_schedule.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(Error::InvalidParameter {
            name: "eps_schedule",
            reason: "need at least two strictly decreasing positive values".into(),
        });
    }
    if phase_rate != 0.0 && !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "limits",
            reason: "oscillatory integrals need a finite interval".into(),
        });
    }

    let mut points: Vec<f64> = breakpoints.to_vec();
    if phase_rate != 0.0 {
        let period = 2.0 * PI / phase_rate.abs();
        let panels = ((hi - lo) / period).ceil() as usize;
        points.extend((1..panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64));
    }

    let integrator = Integrator::with_tol(tol);
    let mut per_eps = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let r = integrator.integrate_with_breakpoints(
            |p| Complex64::new(0.0, phase_rate * p).exp() * integrand(p, eps),
            lo,
            hi,
            &points,
        )?;
        per_eps.push(r.value);
    }

    let diagonal = neville_to_zero(eps_schedule, &per_eps);
    let corrections: Vec<f64> = diagonal.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let value = *diagonal.last().expect("non-empty schedule");

    if let [.., previous, current] = corrections[..] {
        let floor = (10.0 * tol).max(1e-12 * value.norm());
        if current > previous && current > floor {
            return Err(Error::ExtrapolationDivergence { previous, current });
        }
    }

    Ok(DampedIntegral {
        value,
        per_eps,
        corrections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, principal_value_integral, PoleSubtraction};
    use approx::assert_abs_diff_eq;

    fn lorentz(k: f64) -> impl Fn(f64, f64) -> Complex64 {
        move |p, eps| Complex64::new(p * p - k * k, -eps).inv()
    }

    #[test]
    fn neville_reproduces_polynomials() {
        let nodes = [0.4, 0.2, 0.1, 0.05];
        let vals: Vec<Complex64> = nodes
            .iter()
            .map(|&x| Complex64::new(1.0 + 2.0 * x - 3.0 * x * x + x * x * x, x))
            .collect();
        let d = neville_to_zero(&nodes, &vals);
        assert!((d[3] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn far_field_undeformed_truncated() {
        let (k, x, b) = (1.0, 200.0, 50.0);
        let r = oscillatory_integral_damped(
            lorentz(k),
            -b,
            b,
            x,
            &DEFAULT_EPS_SCHEDULE,
            &[-k, k],
            1e-10,
        )
        .unwrap();
        let expected = Complex64::new(0.0, PI) * Complex64::new(0.0, k * x).exp();
        assert!((r.value - expected).norm() / expected.norm() < 0.02);
    }

    #[test]
    fn kempf_far_field() {
        let (k, x) = (1.0f64, 100.0);
        let b = PI / 2.0;
        let p0 = k.atan();
        let r = oscillatory_integral_damped(
            move |p, eps| {
                let g = p.clamp(-b * (1.0 - 1e-12), b * (1.0 - 1e-12)).tan();
                Complex64::new(g * g - k * k, -eps).inv()
            },
            -b,
            b,
            x,
            &DEFAULT_EPS_SCHEDULE,
            &[-p0, p0],
            1e-10,
        )
        .unwrap();
        let expected = Complex64::new(0.0, PI / 2.0) * Complex64::new(0.0, p0 * x).exp();
        assert!((r.value - expected).norm() / expected.norm() < 0.02);
    }

    #[test]
    fn inert_without_pole() {
        let f = |p: f64| 1.0 / (1.0 + p * p);
        let r = oscillatory_integral_damped(
            |p, eps| Complex64::new(f(p), 0.0) / Complex64::new(1.0, -eps),
            -2.0,
            2.0,
            0.0,
            &DEFAULT_EPS_SCHEDULE,
            &[],
            1e-12,
        )
        .unwrap();
        let plain = integrate_adaptive(f, -2.0, 2.0, 1e-12).unwrap().value;
        assert_abs_diff_eq!(r.value.re, plain, epsilon = 1e-8);
        assert_abs_diff_eq!(r.value.im, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn sokhotski_plemelj_at_origin() {
        let (k, b) = (1.0, 3.0);
        let r = oscillatory_integral_damped(
            lorentz(k),
            -b,
            b,
            0.0,
            &DEFAULT_EPS_SCHEDULE,
            &[-k, k],
            1e-11,
        )
        .unwrap();
        let c = 1.0 / (2.0 * k);
        let pv = principal_value_integral(
            |p| 1.0 / (p * p - k * k),
            -b,
            b,
            &[PoleSubtraction::new(k, c), PoleSubtraction::new(-k, -c)],
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(r.value.re, pv, epsilon = 1e-4);
        assert_abs_diff_eq!(r.value.im, PI * 2.0 * c, epsilon = 1e-4);
    }

    #[test]
    fn rejects_bad_schedule() {
        let e =
            oscillatory_integral_damped(lorentz(1.0), -2.0, 2.0, 1.0, &[1e-3, 1e-2], &[], 1e-10);
        assert!(e.is_err());
    }
}
