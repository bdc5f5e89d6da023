//! Globally adaptive Gauss–Kronrod (10/21) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub err_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [0, 1); odd indices are the Gauss points.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

pub const GK21_POINTS: usize = 21;

struct Segment<T> {
    lo: f64,
    hi: f64,
    value: T,
    err: f64,
    floor: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn gk21<T: QuadValue, F: Fn(f64) -> T>(f: &F, lo: f64, hi: f64) -> (T, f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut kronrod = f_center * WGK[10];
    let mut gauss = T::default();
    let mut res_abs = f_center.magnitude() * WGK[10];
    let mut values = [(T::default(), T::default()); 10];

    for (j, &x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        res_abs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).magnitude();
    for (j, (f1, f2)) in values.iter().enumerate() {
        res_asc += WGK[j] * ((*f1 - mean).magnitude() + (*f2 - mean).magnitude());
    }

    let abs_half = half.abs();
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (kronrod * half, err, floor)
}

/// Adaptive integrator settings.
///
/// The loop stops once the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)`. Unbounded limits are mapped onto a finite
/// interval with `p = scale·tan θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
    pub map_scale: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-13,
            max_evaluations: 4_000_000,
            map_scale: 1.0,
        }
    }
}

impl Integrator {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn max_evaluations(mut self, n: usize) -> Self {
        self.max_evaluations = n;
        self
    }

    pub fn map_scale(mut self, scale: f64) -> Self {
        self.map_scale = scale;
        self
    }

    pub fn integrate<T, F>(&self, f: F, lo: f64, hi: f64) -> Result<QuadratureResult<T>>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        self.integrate_with_breakpoints(f, lo, hi, &[])
    }

    /// Integrates over `[lo, hi]`, starting from the partition induced by the
    /// interior `breakpoints` (points outside the interval are ignored).
    pub fn integrate_with_breakpoints<T, F>(
        &self,
        f: F,
        lo: f64,
        hi: f64,
        breakpoints: &[f64],
    ) -> Result<QuadratureResult<T>>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::InvalidParameter {
                name: "limits",
                reason: format!("need lo < hi, got [{lo}, {hi}]"),
            });
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                reason: format!("must be > 0, got {}", self.abs_tol),
            });
        }
        let mut points: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&p| p > lo && p < hi)
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();

        if lo.is_finite() && hi.is_finite() {
            let mut edges = Vec::with_capacity(points.len() + 2);
            edges.push(lo);
            edges.extend(points);
            edges.push(hi);
            self.run(&f, &edges)
        } else {
            let s = self.map_scale;
            let map = |p: f64| (p / s).atan();
            let mut edges = Vec::with_capacity(points.len() + 2);
            edges.push(map(lo));
            edges.extend(points.iter().map(|&p| map(p)));
            edges.push(map(hi));
            let mapped = |t: f64| {
                let c = t.cos();
                f(s * t.tan()) * (s / (c * c))
            };
            self.run(&mapped, &edges)
        }
    }

    fn run<T: QuadValue, F: Fn(f64) -> T>(
        &self,
        f: &F,
        edges: &[f64],
    ) -> Result<QuadratureResult<T>> {
        let mut heap = BinaryHeap::with_capacity(edges.len() * 4);
        let mut settled: Vec<Segment<T>> = Vec::new();
        let mut total = T::default();
        let mut total_err = 0.0;
        let mut evaluations = 0usize;

        for w in edges.windows(2) {
            let (value, err, floor) = gk21(f, w[0], w[1]);
            evaluations += GK21_POINTS;
            total = total + value;
            total_err += err;
            heap.push(Segment {
                lo: w[0],
                hi: w[1],
                value,
                err,
                floor,
            });
        }

        let mut iteration = 0usize;
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.magnitude());
            if total_err <= target {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.lo + worst.hi);
            // unsplittable, or already at the roundoff floor
            if !(mid > worst.lo && mid < worst.hi) || worst.err <= 1.000_001 * worst.floor {
                settled.push(worst);
                continue;
            }
            if evaluations + 2 * GK21_POINTS > self.max_evaluations {
                heap.push(worst);
                let (estimate, err) = Self::collect(heap.into_vec(), settled);
                return Err(Error::BudgetExceeded {
                    estimate: estimate.to_complex(),
                    err_estimate: err,
                    evaluations,
                });
            }
            let (v1, e1, f1) = gk21(f, worst.lo, mid);
            let (v2, e2, f2) = gk21(f, mid, worst.hi);
            evaluations += 2 * GK21_POINTS;
            total = total + (v1 + v2 - worst.value);
            total_err += e1 + e2 - worst.err;
            heap.push(Segment {
                lo: worst.lo,
                hi: mid,
                value: v1,
                err: e1,
                floor: f1,
            });
            heap.push(Segment {
                lo: mid,
                hi: worst.hi,
                value: v2,
                err: e2,
                floor: f2,
            });

            iteration += 1;
            if iteration.is_multiple_of(128) {
                // resum to stop the running totals from drifting
                total = T::default();
                total_err = 0.0;
                for s in heap.iter().chain(settled.iter()) {
                    total = total + s.value;
                    total_err += s.err;
                }
            }
        }

        let (value, err_estimate) = Self::collect(heap.into_vec(), settled);
        Ok(QuadratureResult {
            value,
            err_estimate,
            evaluations,
        })
    }

    fn collect<T: QuadValue>(mut a: Vec<Segment<T>>, b: Vec<Segment<T>>) -> (T, f64) {
        a.extend(b);
        a.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        a.iter()
            .fold((T::default(), 0.0), |(v, e), s| (v + s.value, e + s.err))
    }
}

/// Adaptive integral of `f` over `[lo, hi]` to absolute tolerance `tol`.
pub fn integrate_adaptive<T, F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    Integrator::with_tol(tol).integrate(f, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn textbook_integrals() {
        let r = integrate_adaptive(f64::sin, 0.0, PI, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-10);
        assert!(r.err_estimate >= 0.0 && r.evaluations >= 1);

        let r = integrate_adaptive(|p: f64| p, -1.0, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-14);

        // antiderivative oracle: arctan
        let r = integrate_adaptive(|p: f64| 1.0 / (p * p + 1.0), -10.0, 10.0, 1e-10).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 * 10f64.atan(), epsilon = 1e-10);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        // the 10-point Gauss rule is exact to degree 19, so the embedded
        // error estimate vanishes and one panel suffices
        let r = integrate_adaptive(|x: f64| x.powi(19), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 / 20.0, epsilon = 1e-15);
        assert_eq!(r.evaluations, GK21_POINTS);
    }

    #[test]
    fn unbounded_limits() {
        let r = integrate_adaptive(
            |p: f64| 1.0 / (p * p + 4.0),
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, PI / 2.0, epsilon = 1e-11);
        let r = integrate_adaptive(|p: f64| (-p).exp(), 0.0, f64::INFINITY, 1e-12).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate_adaptive(|p: f64| Complex64::new(0.0, p).exp(), 0.0, 2.0 * PI, 1e-12)
            .unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn budget_exceeded_carries_estimate() {
        let r = Integrator::with_tol(1e-14).max_evaluations(100).integrate(
            |x: f64| (1.0 / x).sin(),
            1e-3,
            1.0,
        );
        match r {
            Err(Error::BudgetExceeded { evaluations, .. }) => assert!(evaluations <= 100),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_reversed_limits() {
        assert!(integrate_adaptive(|x: f64| x, 1.0, 0.0, 1e-10).is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x * 30.0).cos() / (1.0 + x * x);
        let a = integrate_adaptive(f, -5.0, 5.0, 1e-12).unwrap();
        let b = integrate_adaptive(f, -5.0, 5.0, 1e-12).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }
}
