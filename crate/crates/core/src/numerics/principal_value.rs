//! Cauchy principal values by analytic pole subtraction.

use crate::error::{Error, Result};

use super::quadrature::Integrator;

/// Absolute floor on the separation between two subtracted poles.
pub const POLE_SEPARATION_GUARD: f64 = 1e-8;

/// A simple pole `residue/(p − pole)` to be removed from an integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSubtraction {
    pub pole: f64,
    pub residue: f64,
}

impl PoleSubtraction {
    pub fn new(pole: f64, residue: f64) -> Self {
        Self { pole, residue }
    }
}

/// `f(p) − Σ cᵢ/(p − pᵢ)`: bounded near each pole when the residues match.
pub fn subtracted_integrand<'a, F>(
    f: &'a F,
    poles: &'a [PoleSubtraction],
) -> impl Fn(f64) -> f64 + 'a
where
    F: Fn(f64) -> f64,
{
    move |p| {
        let mut v = f(p);
        for s in poles {
            let d = p - s.pole;
            if d != 0.0 {
                v -= s.residue / d;
            }
        }
        v
    }
}

/// `Σ cᵢ ln((hi − pᵢ)/(pᵢ − lo))`, the principal value of the subtracted
/// simple poles. For unbounded limits the residues must sum to zero and the
/// divergent `ln|limit|` pieces cancel.
fn log_terms(lo: f64, hi: f64, poles: &[PoleSubtraction]) -> f64 {
    poles
        .iter()
        .map(|s| {
            let upper = if hi.is_finite() {
                (hi - s.pole).ln()
            } else {
                0.0
            };
            let lower = if lo.is_finite() {
                (s.pole - lo).ln()
            } else {
                0.0
            };
            s.residue * (upper - lower)
        })
        .sum()
}

fn validate(lo: f64, hi: f64, poles: &[PoleSubtraction], tol: f64) -> Result<()> {
    for s in poles {
        if !s.residue.is_finite() || s.residue == 0.0 {
            return Err(Error::InvalidParameter {
                name: "residue",
                reason: format!("residue at {} must be finite and nonzero", s.pole),
            });
        }
        if !(s.pole > lo && s.pole < hi) {
            return Err(Error::PoleAtBoundary {
                pole: s.pole,
                lo,
                hi,
            });
        }
    }
    let min_separation = (10.0 * tol).max(POLE_SEPARATION_GUARD);
    for (i, a) in poles.iter().enumerate() {
        for b in &poles[i + 1..] {
            if (a.pole - b.pole).abs() <= min_separation {
                return Err(Error::PoleSeparation {
                    first: a.pole,
                    second: b.pole,
                    min_separation,
                });
            }
        }
    }
    if !(lo.is_finite() && hi.is_finite()) {
        let sum: f64 = poles.iter().map(|s| s.residue).sum();
        let scale: f64 = poles.iter().map(|s| s.residue.abs()).sum();
        if sum.abs() > 1e-12 * scale {
            return Err(Error::UnbalancedResidues);
        }
    }
    Ok(())
}

/// `PV ∫_lo^hi f(p) dp` for an integrand with simple poles at the listed
/// locations. The pole parts are removed analytically and the bounded
/// remainder is integrated adaptively with the poles as breakpoints.
pub fn principal_value_integral<F>(
    f: F,
    lo: f64,
    hi: f64,
    poles: &[PoleSubtraction],
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    principal_value_with(&Integrator::with_tol(tol), f, lo, hi, poles)
}

pub fn principal_value_with<F>(
    integrator: &Integrator,
    f: F,
    lo: f64,
    hi: f64,
    poles: &[PoleSubtraction],
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    validate(lo, hi, poles, integrator.abs_tol)?;
    let breakpoints: Vec<f64> = poles.iter().map(|s| s.pole).collect();
    let smooth = subtracted_integrand(&f, poles);
    let bulk = integrator.integrate_with_breakpoints(smooth, lo, hi, &breakpoints)?;
    Ok(bulk.value + log_terms(lo, hi, poles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cutoff_poles(k: f64) -> [PoleSubtraction; 2] {
        let c = 1.0 / (2.0 * k);
        [PoleSubtraction::new(k, c), PoleSubtraction::new(-k, -c)]
    }

    #[test]
    fn cutoff_closed_form() {
        let (b, k) = (10.0, 1.0);
        let v = principal_value_integral(|p| 1.0 / (p * p - k * k), -b, b, &cutoff_poles(k), 1e-12)
            .unwrap();
        assert_abs_diff_eq!(v, (9.0f64 / 11.0).ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(v, -0.200_670_695_462_151_16, epsilon = 1e-12);
    }

    #[test]
    fn wide_truncation_tends_to_zero() {
        let v = principal_value_integral(
            |p| 1.0 / (p * p - 1.0),
            -1e6,
            1e6,
            &cutoff_poles(1.0),
            1e-12,
        )
        .unwrap();
        assert!(v.abs() < 1e-5);
        let v = principal_value_integral(
            |p| 1.0 / (p * p - 1.0),
            f64::NEG_INFINITY,
            f64::INFINITY,
            &cutoff_poles(1.0),
            1e-12,
        )
        .unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let k = 2.0;
        // p/(p² − k²) has residue 1/2 at both ±k
        let poles = [PoleSubtraction::new(k, 0.5), PoleSubtraction::new(-k, 0.5)];
        let v =
            principal_value_integral(|p| p / (p * p - k * k), -7.0, 7.0, &poles, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn one_sided_pole() {
        // PV ∫_0^2 dp/(p − 1) = 0; PV ∫_0^3 dp/(p − 1) = ln 2
        let poles = [PoleSubtraction::new(1.0, 1.0)];
        let v = principal_value_integral(|p| 1.0 / (p - 1.0), 0.0, 3.0, &poles, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn subtracted_integrand_is_bounded() {
        let k = 1.3;
        let f = |p: f64| 1.0 / (p * p - k * k);
        let poles = cutoff_poles(k);
        let h = subtracted_integrand(&f, &poles);
        for p in [k + 1e-6, k - 1e-6, -k + 1e-6, -k - 1e-6] {
            assert!(h(p).abs() < 1e-3, "{}", h(p));
        }
    }

    #[test]
    fn errors() {
        let f = |p: f64| 1.0 / (p - 1.0);
        assert!(matches!(
            principal_value_integral(f, 0.0, 1.0, &[PoleSubtraction::new(1.0, 1.0)], 1e-10),
            Err(Error::PoleAtBoundary { .. })
        ));
        let close = [
            PoleSubtraction::new(0.5, 1.0),
            PoleSubtraction::new(0.5 + 1e-9, 1.0),
        ];
        assert!(matches!(
            principal_value_integral(f, 0.0, 1.0, &close, 1e-10),
            Err(Error::PoleSeparation { .. })
        ));
        assert!(matches!(
            principal_value_integral(
                f,
                0.0,
                f64::INFINITY,
                &[PoleSubtraction::new(1.0, 1.0)],
                1e-10
            ),
            Err(Error::UnbalancedResidues)
        ));
    }

    #[test]
    fn linearity() {
        let k = 0.7;
        let poles = cutoff_poles(k);
        let base =
            principal_value_integral(|p| 1.0 / (p * p - k * k), -3.0, 3.0, &poles, 1e-12).unwrap();
        let alpha = -2.5;
        let scaled_poles: Vec<_> = poles
            .iter()
            .map(|s| PoleSubtraction::new(s.pole, alpha * s.residue))
            .collect();
        let scaled =
            principal_value_integral(|p| alpha / (p * p - k * k), -3.0, 3.0, &scaled_poles, 1e-12)
                .unwrap();
        assert_abs_diff_eq!(scaled, alpha * base, epsilon = 1e-11);
    }
}
