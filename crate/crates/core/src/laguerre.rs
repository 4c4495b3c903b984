//! Scaled Laguerre polynomials `L_n^{(α)}(z/g)` with `α = -1 - 1/g`, whose
//! zeros are the saddle points of the eigenvalue integral.

use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::coupling::Coupling;
use crate::dd::DoubleWord;
use crate::error::{Error, Result};
use crate::specfun::{log_gamma, LogMagnitude, NearInteger};

pub const MAX_SWEEPS: usize = 500;
pub const NEWTON_TOLERANCE: f64 = 1e-12;
const ANGULAR_OFFSET: f64 = 0.37;

type ComplexDd = Complex<DoubleWord>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LaguerreSpec {
    n: usize,
    alpha: NearInteger,
    scale: f64,
}

impl LaguerreSpec {
    pub fn new(n: usize, alpha: f64, scale: f64) -> Result<Self> {
        Self::with_alpha(n, NearInteger::from_f64(alpha), scale)
    }

    /// `α` given as integer plus a (possibly tiny) offset.
    pub fn with_alpha(n: usize, alpha: NearInteger, scale: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("laguerre", "degree must be positive"));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::domain("laguerre", format!("scale {scale} must be positive")));
        }
        let k = alpha.int_part();
        if alpha.is_integer() && (-(n as i64)..=-1).contains(&k) {
            return Err(Error::domain(
                "laguerre",
                format!("alpha = {k} makes the polynomial drop degree"),
            ));
        }
        Ok(Self { n, alpha, scale })
    }

    /// The saddle-point polynomial at coupling `g`: `α = -1 - 1/g`, scale `g`.
    pub fn for_coupling(n: usize, g: &Coupling) -> Result<Self> {
        Self::with_alpha(n, g.inverse().neg().add_int(-1), g.g())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }

    pub fn alpha_near(&self) -> &NearInteger {
        &self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `k + α`, keeping the offset when it nearly cancels.
    fn shifted_alpha(&self, k: usize) -> NearInteger {
        self.alpha.add_int(k as i64)
    }

    /// Coefficients `c_0..c_n` of `L_n^{(α)}(x)` in powers of `x`.
    pub fn coefficients(&self) -> Vec<LogMagnitude> {
        let n = self.n;
        let mut out = vec![LogMagnitude::ZERO; n + 1];
        let ln_nfact = log_gamma(n as f64 + 1.0).map(|l| l.logabs).unwrap_or(0.0);
        out[n] = LogMagnitude::new(if n % 2 == 0 { 1 } else { -1 }, -ln_nfact);
        // c_k = c_{k+1} · (-(k+1)(k+1+α)/(n-k))
        for k in (0..n).rev() {
            let s = self.shifted_alpha(k + 1);
            let factor = LogMagnitude::new(
                -signum(s.value_dd()),
                ((k + 1) as f64).ln() + ln_abs(&s) - ((n - k) as f64).ln(),
            );
            out[k] = out[k + 1] * factor;
        }
        out
    }

    /// Monic coefficients `b_0..b_n` (with `b_n = 1`) of `L(z/g)` in powers of `z`.
    pub fn monic_coefficients(&self) -> Vec<DoubleWord> {
        let n = self.n;
        let g = DoubleWord::from_f64(self.scale);
        let mut b = vec![DoubleWord::ZERO; n + 1];
        b[n] = DoubleWord::ONE;
        for k in (0..n).rev() {
            let s = self.shifted_alpha(k + 1).value_dd();
            let ratio = -(DoubleWord::from_f64((k + 1) as f64) * s * g)
                / DoubleWord::from_f64((n - k) as f64);
            b[k] = b[k + 1] * ratio;
        }
        b
    }

    pub fn find_zeros(&self) -> Result<ZeroSet> {
        let b = self.monic_coefficients();
        let n = self.n;
        if b[0].hi == 0.0 {
            return Err(Error::domain("laguerre", "constant coefficient underflowed"));
        }
        let radius = 1.0
            + (0..n)
                .map(|k| b[k].hi.abs().powf(1.0 / (n - k) as f64))
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..n)
            .map(|j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + ANGULAR_OFFSET;
                Complex64::from_polar(radius, th)
            })
            .collect();
        let mut done = vec![false; n];
        let mut sweeps = 0;
        loop {
            sweeps += 1;
            let mut all = true;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let ratio = newton_ratio(&b, z[i]);
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        s += 1.0 / (z[i] - z[j]);
                    }
                }
                let w = ratio / (1.0 - ratio * s);
                if !w.re.is_finite() || !w.im.is_finite() {
                    // Landed on another root; nudge and retry next sweep.
                    z[i] *= Complex64::from_polar(1.0 + 1e-7, 1e-7);
                    all = false;
                    continue;
                }
                z[i] -= w;
                if w.norm() <= NEWTON_TOLERANCE * z[i].norm() {
                    done[i] = true;
                } else {
                    all = false;
                }
            }
            if all {
                break;
            }
            if sweeps >= MAX_SWEEPS {
                let worst = z
                    .iter()
                    .map(|&zi| (newton_ratio(&b, zi) / zi).norm())
                    .fold(0.0, f64::max);
                return Err(Error::NoConvergence {
                    sweeps,
                    worst_residual: worst,
                });
            }
        }
        // One final Newton polish at double-word accuracy.
        for zi in z.iter_mut() {
            *zi -= newton_ratio(&b, *zi);
        }
        let residuals = z.iter().map(|&zi| newton_ratio(&b, zi).norm()).collect();
        Ok(ZeroSet {
            spec: *self,
            zeros: z,
            residuals,
            sweeps,
        })
    }

    /// `p(z)` of the monic scaled polynomial, evaluated in double-word.
    pub fn eval_monic(&self, z: Complex64) -> Complex64 {
        let b = self.monic_coefficients();
        let (p, _) = horner(&b, z);
        Complex64::new(p.re.to_f64(), p.im.to_f64())
    }
}

fn ln_abs(x: &NearInteger) -> f64 {
    if x.int_part() == 0 {
        x.ln_abs_offset()
    } else {
        x.value().abs().ln()
    }
}

fn signum(x: DoubleWord) -> i8 {
    if x.hi > 0.0 {
        1
    } else if x.hi < 0.0 {
        -1
    } else {
        0
    }
}

fn horner(b: &[DoubleWord], z: Complex64) -> (ComplexDd, ComplexDd) {
    let zd = ComplexDd::new(z.re.into(), z.im.into());
    let n = b.len() - 1;
    let mut p = ComplexDd::new(b[n], DoubleWord::ZERO);
    let mut dp = ComplexDd::new(DoubleWord::ZERO, DoubleWord::ZERO);
    for k in (0..n).rev() {
        dp = dp * zd + p;
        p = p * zd + ComplexDd::new(b[k], DoubleWord::ZERO);
    }
    (p, dp)
}

/// `p(z)/p'(z)` with the polynomial evaluated in double-word arithmetic.
fn newton_ratio(b: &[DoubleWord], z: Complex64) -> Complex64 {
    if z.norm() <= 1.0 {
        let (p, dp) = horner(b, z);
        let q = p / dp;
        return Complex64::new(q.re.to_f64(), q.im.to_f64());
    }
    // Outside the unit disc use p(z) = z^n q(1/z) to avoid overflow:
    // p/p' = z q(w) / (n q(w) - w q'(w)), w = 1/z.
    let n = b.len() - 1;
    let w = 1.0 / z;
    let rev: Vec<DoubleWord> = b.iter().rev().cloned().collect();
    let (q, dq) = horner(&rev, w);
    let wd = ComplexDd::new(w.re.into(), w.im.into());
    let zd = ComplexDd::new(z.re.into(), z.im.into());
    let nd = ComplexDd::new(DoubleWord::from_f64(n as f64), DoubleWord::ZERO);
    let r = zd * q / (nd * q - wd * dq);
    Complex64::new(r.re.to_f64(), r.im.to_f64())
}

/// The n zeros of `L_n^{(α)}(z/g)`.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub spec: LaguerreSpec,
    pub zeros: Vec<Complex64>,
    /// `|p(z_i)/p'(z_i)|` after polishing.
    pub residuals: Vec<f64>,
    pub sweeps: usize,
}

impl ZeroSet {
    pub fn n(&self) -> usize {
        self.zeros.len()
    }

    pub fn sum_reciprocal(&self) -> Complex64 {
        self.zeros.iter().map(|z| 1.0 / z).sum()
    }

    /// `max_i |(1/g)(1 + 1/z_i) + Σ_{j≠i} 2/(z_j - z_i)|`.
    pub fn saddle_residual(&self, g: f64) -> Result<f64> {
        saddle_residual(&self.zeros, g)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Zeros with `|Im z| < band` and `Re z ∈ [a - band, b + band]`.
    pub fn count_near_interval(&self, a: f64, b: f64, band: f64) -> usize {
        self.zeros
            .iter()
            .filter(|z| z.im.abs() < band && z.re >= a - band && z.re <= b + band)
            .count()
    }

    /// Largest distance from a zero to its conjugate's nearest partner.
    pub fn conjugate_asymmetry(&self) -> f64 {
        self.zeros
            .iter()
            .map(|z| {
                let c = z.conj();
                self.zeros
                    .iter()
                    .map(|w| (w - c).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Monic polynomial from the zeros and its first two derivatives at `z`.
    pub fn monic_from_zeros(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut d2p = Complex64::new(0.0, 0.0);
        for &zi in &self.zeros {
            let f = z - zi;
            d2p = d2p * f + 2.0 * dp;
            dp = dp * f + p;
            p *= f;
        }
        (p, dp, d2p)
    }

    /// CSV rows `n,index,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,index,re,im\n");
        for (i, z) in self.zeros.iter().enumerate() {
            s.push_str(&format!("{},{},{:e},{:e}\n", self.n(), i, z.re, z.im));
        }
        s
    }
}

pub fn saddle_residual(zeros: &[Complex64], g: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, &zi) in zeros.iter().enumerate() {
        let mut s = (1.0 + 1.0 / zi) / g;
        for (j, &zj) in zeros.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = zj - zi;
            if d.norm() == 0.0 {
                return Err(Error::CoincidentZeros(i.min(j), i.max(j)));
            }
            s += 2.0 / d;
        }
        worst = worst.max(s.norm());
    }
    Ok(worst)
}
