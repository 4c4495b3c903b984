//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature for real and complex
//! integrands on finite intervals.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_584,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights belong to the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Values that can be integrated: closed under addition and real scaling.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-11,
            rel: 1e-11,
            max_intervals: 4000,
        }
    }
}

impl Tolerance {
    pub fn abs(abs: f64) -> Self {
        Tolerance {
            abs,
            rel: 0.0,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T> Eq for Panel<T> {}

impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    (value, error)
}

/// Integrate `f` over `[a, b]` until the summed error estimate drops below
/// `max(tol.abs, tol.rel * |I|)`.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = kronrod21(&mut f, a, b);
    let mut panels = BinaryHeap::new();
    panels.push(Panel { a, b, value, error });
    let mut evaluations = 21;
    let mut total = value;
    let mut err = error;
    loop {
        let target = tol.abs.max(tol.rel * total.magnitude());
        if err <= target {
            // Re-sum to shed the drift of the running totals.
            let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
            let error = panels.iter().map(|p| p.error).sum();
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= tol.max_intervals || !err.is_finite() {
            return Err(Error::Quadrature {
                estimate: err,
                tolerance: target,
            });
        }
        let p = panels.pop().unwrap();
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Quadrature {
                estimate: err,
                tolerance: target,
            });
        }
        let (v1, e1) = kronrod21(&mut f, p.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, p.b);
        evaluations += 42;
        total = total - p.value + v1 + v2;
        err = (err - p.error + e1 + e2).max(0.0);
        panels.push(Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        });
        panels.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
}

/// Integrate an analytic function along the straight segment from `z0` to `z1`.
pub fn integrate_segment<F>(mut f: F, z0: Complex64, z1: Complex64, tol: Tolerance) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Complex64,
{
    let dz = z1 - z0;
    integrate(|s| f(z0 + dz * s) * dz, 0.0, 1.0, tol).map(|e| e.value)
}

/// Integrate over a sequence of breakpoints `[x0, x1, ..., xm]`.
pub fn integrate_pieces<T, F>(mut f: F, breaks: &[f64], tol: Tolerance) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut acc = T::zero();
    for w in breaks.windows(2) {
        acc = acc + integrate(&mut f, w[0], w[1], tol)?.value;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let est = integrate(|x: f64| x.powi(18), -1.0, 1.0, Tolerance::default()).unwrap();
        assert!((est.value - 2.0 / 19.0).abs() < 1e-15);
        assert_eq!(est.evaluations, 21);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let est = integrate(|x: f64| x.ln(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((est.value + 1.0).abs() < 1e-10);
    }

    #[test]
    fn complex_segment_integral_of_inverse() {
        // ∫ dz/z along the segment 1 -> i equals i π/2.
        let v = integrate_segment(
            |z| z.inv(),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Tolerance::default(),
        )
        .unwrap();
        assert!((v - Complex64::new(0.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-13);
    }

    #[test]
    fn reports_failure_when_budget_exhausted() {
        let tol = Tolerance {
            abs: 1e-300,
            rel: 0.0,
            max_intervals: 3,
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0, tol);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
