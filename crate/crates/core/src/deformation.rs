//! Deformation functions of the commutator `[X, P] = iħ f(P)`.
//!
//! In the momentum representation the physical momentum is `P = g(p)` with
//! `p` on the auxiliary band `[-b, b]`, `g` odd, and `dg/dp = f(g(p))`.
//! A finite `b` produces a minimal length `l0 = πħ/(2b)`, the width scale of
//! the band-limited reproducing kernel.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Relative distance from the band edge at which `g` is clamped.
pub const EDGE_EPS: f64 = 1e-12;

/// Relative tolerance applied to every consistency-check defect.
pub const CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeformationKind {
    Undeformed,
    Cutoff,
    Kempf,
    MaxMomentum,
    Custom,
}

impl DeformationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Undeformed => "undeformed",
            Self::Cutoff => "cutoff",
            Self::Kempf => "kempf",
            Self::MaxMomentum => "maxmomentum",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for DeformationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeformationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "undeformed" => Ok(Self::Undeformed),
            "cutoff" => Ok(Self::Cutoff),
            "kempf" => Ok(Self::Kempf),
            "maxmomentum" | "max-momentum" | "max_momentum" => Ok(Self::MaxMomentum),
            "custom" => Ok(Self::Custom),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
struct CustomFns {
    f: Evaluator,
    g: Evaluator,
    g_inv: Evaluator,
}

/// An immutable deformation pair `(f, g)` together with its band `b` and
/// maximal physical momentum `a = g(b⁻)`.
#[derive(Clone)]
pub struct DeformationSpec {
    kind: DeformationKind,
    beta: Option<f64>,
    b: f64,
    a: f64,
    custom: Option<CustomFns>,
}

impl fmt::Debug for DeformationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeformationSpec")
            .field("kind", &self.kind)
            .field("beta", &self.beta)
            .field("b", &self.b)
            .field("a", &self.a)
            .finish()
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}

/// Builds one of the built-in deformations. Parameters a kind does not use
/// are ignored.
pub fn make_deformation(kind: DeformationKind, beta: f64, b: f64) -> Result<DeformationSpec> {
    match kind {
        DeformationKind::Undeformed => Ok(DeformationSpec::undeformed()),
        DeformationKind::Cutoff => DeformationSpec::cutoff(b),
        DeformationKind::Kempf => DeformationSpec::kempf(beta),
        DeformationKind::MaxMomentum => DeformationSpec::max_momentum(beta),
        DeformationKind::Custom => Err(Error::InvalidParameter {
            name: "kind",
            reason: "custom deformations are built with DeformationSpec::custom".into(),
        }),
    }
}

impl DeformationSpec {
    /// `f = 1`, `g(p) = p`, unbounded band.
    pub fn undeformed() -> Self {
        Self {
            kind: DeformationKind::Undeformed,
            beta: None,
            b: f64::INFINITY,
            a: f64::INFINITY,
            custom: None,
        }
    }

    /// `f = 1`, `g(p) = p`, momenta cut off at `|p| = b`.
    pub fn cutoff(b: f64) -> Result<Self> {
        require_positive("b", b)?;
        Ok(Self {
            kind: DeformationKind::Cutoff,
            beta: None,
            b,
            a: b,
            custom: None,
        })
    }

    /// `f(P) = 1 + βP²`, `g(p) = tan(√β p)/√β`, `b = π/(2√β)`, `a = ∞`.
    pub fn kempf(beta: f64) -> Result<Self> {
        require_positive("beta", beta)?;
        Ok(Self {
            kind: DeformationKind::Kempf,
            beta: Some(beta),
            b: FRAC_PI_2 / beta.sqrt(),
            a: f64::INFINITY,
            custom: None,
        })
    }

    /// `f(P) = √(1 − βP²)`, `g(p) = sin(√β p)/√β`, `b = π/(2√β)`, `a = 1/√β`.
    pub fn max_momentum(beta: f64) -> Result<Self> {
        require_positive("beta", beta)?;
        Ok(Self {
            kind: DeformationKind::MaxMomentum,
            beta: Some(beta),
            b: FRAC_PI_2 / beta.sqrt(),
            a: 1.0 / beta.sqrt(),
            custom: None,
        })
    }

    /// User-supplied deformation. The evaluators are validated with
    /// [`DeformationSpec::consistency_check`] before the spec is returned.
    pub fn custom<F, G, H>(f: F, g: G, g_inv: H, b: f64, a: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(b > 0.0) || !(a > 0.0) {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: format!("band limits must be > 0, got b = {b}, a = {a}"),
            });
        }
        let spec = Self {
            kind: DeformationKind::Custom,
            beta: None,
            b,
            a,
            custom: Some(CustomFns {
                f: Arc::new(f),
                g: Arc::new(g),
                g_inv: Arc::new(g_inv),
            }),
        };
        let report = spec.consistency_check(101);
        if !report.passed {
            return Err(Error::InconsistentDeformation(report.to_string()));
        }
        Ok(spec)
    }

    pub fn kind(&self) -> DeformationKind {
        self.kind
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Half-width of the auxiliary momentum band.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Maximal physical momentum.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn is_band_limited(&self) -> bool {
        self.b.is_finite()
    }

    /// Kernel length scale `l0 = πħ/(2b)`; zero for an unbounded band.
    pub fn min_length(&self, hbar: f64) -> f64 {
        if self.b.is_finite() {
            FRAC_PI_2 * hbar / self.b
        } else {
            0.0
        }
    }

    /// `g(p)` for `|p| < b`.
    pub fn g(&self, p: f64) -> Result<f64> {
        if self.b.is_finite() && !(p.abs() < self.b) {
            return Err(Error::Domain {
                what: "g",
                value: p,
                bound: self.b,
            });
        }
        Ok(self.g_raw(p))
    }

    /// `f(P)` for `|P| < a`.
    pub fn f(&self, momentum: f64) -> Result<f64> {
        if self.a.is_finite() && !(momentum.abs() < self.a) {
            return Err(Error::Domain {
                what: "f",
                value: momentum,
                bound: self.a,
            });
        }
        Ok(self.f_raw(momentum))
    }

    /// `g⁻¹(P)` for `|P| < a`.
    pub fn g_inverse(&self, momentum: f64) -> Result<f64> {
        if self.a.is_finite() && !(momentum.abs() < self.a) {
            return Err(Error::Domain {
                what: "g inverse",
                value: momentum,
                bound: self.a,
            });
        }
        Ok(self.g_inv_raw(momentum))
    }

    /// Clamps `p` into `[-b(1-ε), b(1-ε)]`.
    pub fn clamp_to_band(&self, p: f64) -> f64 {
        if self.b.is_finite() {
            let edge = self.b * (1.0 - EDGE_EPS);
            p.clamp(-edge, edge)
        } else {
            p
        }
    }

    /// Unchecked `g`, with the argument clamped to the open band. Used inside
    /// quadrature loops.
    pub fn g_raw(&self, p: f64) -> f64 {
        self.g_open(self.clamp_to_band(p))
    }

    /// `g` without clamping; only valid strictly inside the band.
    pub(crate) fn g_open(&self, p: f64) -> f64 {
        match self.kind {
            DeformationKind::Undeformed | DeformationKind::Cutoff => p,
            DeformationKind::Kempf => {
                let s = self.sqrt_beta();
                (s * p).tan() / s
            }
            DeformationKind::MaxMomentum => {
                let s = self.sqrt_beta();
                (s * p).sin() / s
            }
            DeformationKind::Custom => (self.custom_fns().g)(p),
        }
    }

    /// `g(p) − g(p0)` without the cancellation of a plain subtraction; both
    /// arguments strictly inside the band.
    pub(crate) fn g_difference(&self, p: f64, p0: f64) -> f64 {
        match self.kind {
            DeformationKind::Undeformed | DeformationKind::Cutoff => p - p0,
            DeformationKind::Kempf => {
                let s = self.sqrt_beta();
                (s * (p - p0)).sin() / ((s * p).cos() * (s * p0).cos() * s)
            }
            DeformationKind::MaxMomentum => {
                let s = self.sqrt_beta();
                2.0 * (0.5 * s * (p + p0)).cos() * (0.5 * s * (p - p0)).sin() / s
            }
            DeformationKind::Custom => self.g_open(p) - self.g_open(p0),
        }
    }

    /// Unchecked `f`.
    pub fn f_raw(&self, momentum: f64) -> f64 {
        match self.kind {
            DeformationKind::Undeformed | DeformationKind::Cutoff => 1.0,
            DeformationKind::Kempf => 1.0 + self.beta_value() * momentum * momentum,
            DeformationKind::MaxMomentum => (1.0 - self.beta_value() * momentum * momentum)
                .max(0.0)
                .sqrt(),
            DeformationKind::Custom => (self.custom_fns().f)(momentum),
        }
    }

    /// Unchecked `g⁻¹`.
    pub fn g_inv_raw(&self, momentum: f64) -> f64 {
        match self.kind {
            DeformationKind::Undeformed | DeformationKind::Cutoff => momentum,
            DeformationKind::Kempf => {
                let s = self.sqrt_beta();
                (s * momentum).atan() / s
            }
            DeformationKind::MaxMomentum => {
                let s = self.sqrt_beta();
                (s * momentum).clamp(-1.0, 1.0).asin() / s
            }
            DeformationKind::Custom => (self.custom_fns().g_inv)(momentum),
        }
    }

    fn beta_value(&self) -> f64 {
        self.beta.expect("beta is set for kempf and maxmomentum")
    }

    fn sqrt_beta(&self) -> f64 {
        self.beta_value().sqrt()
    }

    fn custom_fns(&self) -> &CustomFns {
        self.custom.as_ref().expect("custom evaluators present")
    }

    /// Samples `n_samples` points on the inner 90% of the band (or `[-10, 10]`
    /// for an unbounded band) and measures how well the evaluators satisfy
    /// `g' = f∘g`, oddness, monotonicity and the inverse round trip.
    ///
    /// Defects are relative: each is divided by `max(1, |reference|)`.
    pub fn consistency_check(&self, n_samples: usize) -> ConsistencyReport {
        let n = n_samples.max(3);
        let half = if self.b.is_finite() {
            0.9 * self.b
        } else {
            10.0
        };
        let step = 1e-4 * self.b.min(1.0);

        let mut derivative = 0.0f64;
        let mut oddness = 0.0f64;
        let mut inverse = 0.0f64;
        let mut violations = 0usize;
        let mut previous = f64::NEG_INFINITY;

        for i in 0..n {
            let p = -half + 2.0 * half * i as f64 / (n - 1) as f64;
            let gp = self.g_raw(p);
            let slope = (self.g_raw(p + step) - self.g_raw(p - step)) / (2.0 * step);
            let fg = self.f_raw(gp);
            derivative = derivative.max((slope - fg).abs() / fg.abs().max(1.0));
            oddness = oddness.max((gp + self.g_raw(-p)).abs() / gp.abs().max(1.0));
            inverse = inverse.max((self.g_inv_raw(gp) - p).abs() / p.abs().max(1.0));
            if !(fg > 0.0) || !(gp > previous) {
                violations += 1;
            }
            previous = gp;
        }
        let g0 = self.g_raw(0.0).abs();

        let passed = derivative < CONSISTENCY_TOL
            && oddness < CONSISTENCY_TOL
            && inverse < CONSISTENCY_TOL
            && g0 < CONSISTENCY_TOL
            && violations == 0;
        ConsistencyReport {
            samples: n,
            max_derivative_defect: derivative,
            oddness_defect: oddness,
            inverse_defect: inverse,
            monotonicity_violations: violations,
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub samples: usize,
    /// `max |g'(p) − f(g(p))|` by central differences.
    pub max_derivative_defect: f64,
    /// `max |g(p) + g(−p)|`.
    pub oddness_defect: f64,
    /// `max |g⁻¹(g(p)) − p|`.
    pub inverse_defect: f64,
    /// Points where `g` fails to increase or `f` is not positive.
    pub monotonicity_violations: usize,
    pub passed: bool,
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} samples: derivative defect {:e}, oddness defect {:e}, inverse defect {:e}, {} monotonicity violations ({})",
            self.samples,
            self.max_derivative_defect,
            self.oddness_defect,
            self.inverse_defect,
            self.monotonicity_violations,
            if self.passed { "pass" } else { "fail" }
        )
    }
}
