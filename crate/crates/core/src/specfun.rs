//! Special functions on the real axis: Bernoulli numbers, log-Gamma, the
//! Barnes G function on both half-axes, and the Clausen function `Cl₂`.
//!
//! Anything that can overflow a double is returned as a [`LogMagnitude`].

use std::f64::consts::{LN_2, PI};
use std::ops::{Div, Mul};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::DoubleWord;
use crate::error::{Error, Result};

/// Crossover between the asymptotic series and the functional recursion for
/// both `ln Γ` and `ln G`.
pub const ASYMPTOTIC_THRESHOLD: f64 = 20.0;

/// Largest Bernoulli index held in the shared table.
pub const MAX_BERNOULLI_INDEX: usize = 64;

/// `ζ'(-1) = 1/12 - ln A`, with `A` the Glaisher–Kinkelin constant.
pub const ZETA_PRIME_MINUS1: f64 = -0.165_421_143_700_450_93;

pub fn zeta_prime_minus1() -> f64 {
    ZETA_PRIME_MINUS1
}

const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Sign and natural log of the absolute value of a real number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogMagnitude {
    pub sign: i8,
    pub logabs: f64,
}

impl LogMagnitude {
    pub const ZERO: Self = Self {
        sign: 0,
        logabs: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        logabs: 0.0,
    };

    pub fn new(sign: i8, logabs: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                logabs,
            }
        }
    }

    pub fn positive(logabs: f64) -> Self {
        Self { sign: 1, logabs }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                logabs: x.abs().ln(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Back to linear scale; overflows to ±inf for large magnitudes.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.logabs.exp()
        }
    }

    pub fn powi(self, k: i64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        Self {
            sign,
            logabs: self.logabs * k as f64,
        }
    }

    pub fn recip(self) -> Self {
        Self {
            sign: self.sign,
            logabs: -self.logabs,
        }
    }
}

impl Mul for LogMagnitude {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: self.sign * rhs.sign,
                logabs: self.logabs + rhs.logabs,
            }
        }
    }
}

impl Div for LogMagnitude {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

/// A real number stored as `int + offset` with `|offset| <= 1/2`.
///
/// Arguments such as `1/g_n = ⌊n/t⌋ + e^{-nr}/2` sit astronomically close to an
/// integer; the offset (and its logarithm, which survives underflow) is kept
/// exactly so that `sin(πx)` and the nearby poles of Γ are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearInteger {
    int: i64,
    offset: f64,
    ln_abs_offset: f64,
}

impl NearInteger {
    pub fn from_f64(x: f64) -> Self {
        let int = x.round();
        Self::from_parts(int as i64, x - int)
    }

    /// `int + offset` for any finite offset; renormalizes to `|offset| <= 1/2`.
    pub fn from_parts(int: i64, offset: f64) -> Self {
        let shift = offset.round();
        let off = offset - shift;
        Self {
            int: int + shift as i64,
            offset: off,
            ln_abs_offset: off.abs().ln(),
        }
    }

    /// `int + sign * exp(ln_offset)`, for offsets that may underflow a double.
    /// The offset must be below 1/2 in magnitude.
    pub fn from_log_offset(int: i64, sign: f64, ln_offset: f64) -> Self {
        debug_assert!(ln_offset < -LN_2 + 1e-12);
        Self {
            int,
            offset: sign.signum() * ln_offset.exp(),
            ln_abs_offset: ln_offset,
        }
    }

    pub fn integer(k: i64) -> Self {
        Self {
            int: k,
            offset: 0.0,
            ln_abs_offset: f64::NEG_INFINITY,
        }
    }

    pub fn int_part(&self) -> i64 {
        self.int
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn ln_abs_offset(&self) -> f64 {
        self.ln_abs_offset
    }

    pub fn value(&self) -> f64 {
        self.int as f64 + self.offset
    }

    pub fn value_dd(&self) -> DoubleWord {
        DoubleWord::sum(self.int as f64, self.offset)
    }

    pub fn is_integer(&self) -> bool {
        self.ln_abs_offset == f64::NEG_INFINITY
    }

    pub fn neg(&self) -> Self {
        Self {
            int: -self.int,
            offset: -self.offset,
            ln_abs_offset: self.ln_abs_offset,
        }
    }

    pub fn add_int(&self, k: i64) -> Self {
        Self {
            int: self.int + k,
            ..*self
        }
    }

    pub fn floor(&self) -> i64 {
        if self.offset < 0.0 {
            self.int - 1
        } else {
            self.int
        }
    }

    /// Fractional part `x - ⌊x⌋` in `[0, 1)`.
    pub fn fract(&self) -> f64 {
        if self.offset < 0.0 {
            1.0 + self.offset
        } else {
            self.offset
        }
    }

    /// `ln|sin(πx)|`; `-inf` at integers.
    pub fn ln_abs_sin_pi(&self) -> f64 {
        let d = self.offset.abs();
        if self.is_integer() {
            f64::NEG_INFINITY
        } else if d < 1e-4 {
            let u = (PI * d).powi(2);
            // ln(sin(y)/y) = -y²/6 - y⁴/180 - ...
            LN_PI + self.ln_abs_offset - u / 6.0 - u * u / 180.0
        } else {
            (PI * d).sin().ln()
        }
    }

    /// Sign of `sin(πx)`.
    pub fn sign_sin_pi(&self) -> i8 {
        if self.is_integer() {
            0
        } else {
            let s: i8 = if self.offset > 0.0 { 1 } else { -1 };
            if self.int.rem_euclid(2) == 0 {
                s
            } else {
                -s
            }
        }
    }
}

/// Exact Bernoulli numbers `B_0 … B_max` (convention `B_1 = -1/2`).
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl BernoulliTable {
    /// Builds the table from `Σ_{k=0}^{m} C(m+1, k) B_k = 0`, seeded by `B_0 = 1`.
    pub fn new(max_index: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(max_index + 1);
        values.push(BigRational::one());
        for m in 1..=max_index {
            if m > 1 && m % 2 == 1 {
                values.push(BigRational::zero());
                continue;
            }
            // Binomials C(m+1, k) by a running product.
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (k, b) in values.iter().enumerate() {
                if k > 0 {
                    binom = binom * BigInt::from(m + 2 - k) / BigInt::from(k);
                }
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(binom.clone());
                }
            }
            values.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        Self { values }
    }

    pub fn shared() -> &'static BernoulliTable {
        &tables().bernoulli
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> &BigRational {
        &self.values[k]
    }

    pub fn get_f64(&self, k: usize) -> f64 {
        self.values[k].to_f64().unwrap_or(f64::NAN)
    }

    pub fn even(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.values.iter().enumerate().step_by(2)
    }
}

pub(crate) fn rational_to_dd(r: &BigRational) -> DoubleWord {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    let rest = r - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
    DoubleWord::new(hi, rest.to_f64().unwrap_or(0.0))
}

struct Tables {
    bernoulli: BernoulliTable,
    /// `B_{2k} / (2k (2k-1))`, k ≥ 1: Stirling series for ln Γ.
    stirling: Vec<DoubleWord>,
    /// `B_{2k} / (2k (2k-2))`, k ≥ 2: asymptotic series for ln G.
    barnes: Vec<f64>,
    /// `|B_{2k}| / (2k (2k+1)!)`, k ≥ 1: small-angle series for Cl₂.
    clausen: Vec<f64>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let bernoulli = BernoulliTable::new(MAX_BERNOULLI_INDEX);
        let mut stirling = Vec::new();
        let mut barnes = Vec::new();
        let mut clausen = Vec::new();
        let mut factorial = BigInt::from(6); // (2k+1)! at k = 1
        for k in 1..=MAX_BERNOULLI_INDEX / 2 {
            let b = bernoulli.get(2 * k);
            let k2 = BigInt::from(2 * k);
            stirling.push(rational_to_dd(
                &(b / BigRational::from_integer(&k2 * BigInt::from(2 * k - 1))),
            ));
            if k >= 2 {
                let c = b / BigRational::from_integer(&k2 * BigInt::from(2 * k - 2));
                barnes.push(c.to_f64().unwrap());
            }
            if k > 1 {
                factorial *= BigInt::from(2 * k) * BigInt::from(2 * k + 1);
            }
            let c = b.abs() / BigRational::from_integer(&k2 * &factorial);
            clausen.push(c.to_f64().unwrap());
        }
        Tables {
            bernoulli,
            stirling,
            barnes,
            clausen,
        }
    })
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Stirling series for `ln Γ(x)`, `x >= ASYMPTOTIC_THRESHOLD`.
fn ln_gamma_asymptotic(x: f64) -> f64 {
    let mut sum = (x - 0.5) * x.ln() - x + HALF_LN_2PI;
    let inv2 = 1.0 / (x * x);
    let mut pow = 1.0 / x;
    let mut last = f64::INFINITY;
    for c in &tables().stirling {
        let term = c.to_f64() * pow;
        if term.abs() >= last || term.abs() < 1e-18 * sum.abs() {
            break;
        }
        sum += term;
        last = term.abs();
        pow *= inv2;
    }
    sum
}

/// `ln Γ(x)` for `x > 0`.
fn ln_gamma_pos(x: f64) -> f64 {
    if x >= ASYMPTOTIC_THRESHOLD {
        return ln_gamma_asymptotic(x);
    }
    // The shifted product loses absolute accuracy near the zeros at 1 and 2.
    ln_gamma_dd(DoubleWord::from_f64(x)).to_f64()
}

/// `ln|Γ(x)|` with the sign of `Γ(x)`.
pub fn log_gamma(x: f64) -> Result<LogMagnitude> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::domain("log_gamma", format!("pole or invalid argument {x}")));
    }
    if x > 0.0 {
        return Ok(LogMagnitude::positive(ln_gamma_pos(x)));
    }
    log_gamma_near(&NearInteger::from_f64(x))
}

/// `ln|Γ(x)|` for an argument that may sit extremely close to a pole.
pub fn log_gamma_near(x: &NearInteger) -> Result<LogMagnitude> {
    let v = x.value();
    if x.is_integer() && x.int_part() <= 0 {
        return Err(Error::domain("log_gamma", format!("pole at {}", x.int_part())));
    }
    if v > 0.5 {
        return Ok(LogMagnitude::positive(ln_gamma_pos(v)));
    }
    // Reflection: Γ(x) Γ(1-x) = π / sin(πx), with 1 - x > 1/2.
    let one_minus = 1.0 - x.int_part() as f64 - x.offset();
    let logabs = LN_PI - x.ln_abs_sin_pi() - ln_gamma_pos(one_minus);
    Ok(LogMagnitude::new(x.sign_sin_pi(), logabs))
}

/// `ln Γ(x)` in double-word precision for `x > 0`.
pub fn ln_gamma_dd(x: DoubleWord) -> DoubleWord {
    let threshold = ASYMPTOTIC_THRESHOLD;
    let mut y = x;
    let mut prod = DoubleWord::ONE;
    while y.hi < threshold {
        prod *= y;
        y += DoubleWord::ONE;
    }
    let mut sum = (y - DoubleWord::from_f64(0.5)) * y.ln() - y + DoubleWord::HALF_LN_2PI;
    let inv = DoubleWord::ONE / y;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut last = f64::INFINITY;
    for c in &tables().stirling {
        let term = *c * pow;
        let mag = term.hi.abs();
        if mag >= last || mag < 1e-34 * sum.hi.abs() {
            break;
        }
        sum += term;
        last = mag;
        pow *= inv2;
    }
    if prod.hi != 1.0 || prod.lo != 0.0 {
        sum -= prod.ln();
    }
    sum
}

/// Asymptotic expansion of `ln G(w + 1)` for large `w`.
fn ln_barnes_asymptotic(w: f64) -> f64 {
    let lw = w.ln();
    let w2 = w * w;
    let mut sum = 0.5 * w2 * lw - 0.75 * w2 + 0.5 * w * LN_2PI - lw / 12.0 + ZETA_PRIME_MINUS1;
    let inv2 = 1.0 / w2;
    let mut pow = inv2;
    let mut last = f64::INFINITY;
    for c in &tables().barnes {
        let term = c * pow;
        if term.abs() >= last || term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
        sum += term;
        last = term.abs();
        pow *= inv2;
    }
    sum
}

/// `ln G(x)` for `x > 0` (G is positive there).
pub fn log_barnes_g_pos(x: f64) -> Result<LogMagnitude> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_barnes_g_pos", format!("argument {x} not positive")));
    }
    if x >= ASYMPTOTIC_THRESHOLD {
        return Ok(LogMagnitude::positive(ln_barnes_asymptotic(x - 1.0)));
    }
    // G(x) = G(x + m) / ∏_{j<m} Γ(x + j)
    let shift = (ASYMPTOTIC_THRESHOLD - x).ceil() as usize;
    let mut acc = ln_barnes_asymptotic(x + shift as f64 - 1.0);
    for j in 0..shift {
        acc -= ln_gamma_pos(x + j as f64);
    }
    Ok(LogMagnitude::positive(acc))
}

/// `G(-x)` for positive non-integer `x`, by the reflection through `G(x+2)`
/// and the Clausen function.
pub fn log_barnes_g_neg(x: f64) -> Result<LogMagnitude> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_barnes_g_neg", format!("argument {x} not positive")));
    }
    log_barnes_g_neg_near(&NearInteger::from_f64(x))
}

/// [`log_barnes_g_neg`] for an argument held as integer + offset.
pub fn log_barnes_g_neg_near(x: &NearInteger) -> Result<LogMagnitude> {
    if x.is_integer() {
        return Err(Error::domain(
            "log_barnes_g_neg",
            format!("G vanishes at -{}", x.int_part()),
        ));
    }
    let v = x.value();
    let floor = x.floor();
    let sign = if (floor.div_euclid(2) - 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let g_shift = log_barnes_g_pos(v + 2.0)?.logabs;
    let logabs = g_shift
        + (v + 1.0) * (x.ln_abs_sin_pi() - LN_PI)
        + clausen2(2.0 * PI * x.fract()) / (2.0 * PI);
    Ok(LogMagnitude::new(sign, logabs))
}

/// `ln|G(x)|` with sign, for any real `x`; zero at non-positive integers.
pub fn log_barnes_g(x: &NearInteger) -> Result<LogMagnitude> {
    let v = x.value();
    if v > 0.0 && !(x.is_integer() && x.int_part() == 0) {
        if v < 0.5 {
            // Positive but close to the zero at the origin: G(x) = G(x+1)/Γ(x).
            let up = log_barnes_g_pos(v + 1.0)?;
            return Ok(up / log_gamma_near(x)?);
        }
        return log_barnes_g_pos(v);
    }
    if x.is_integer() {
        return Ok(LogMagnitude::ZERO);
    }
    log_barnes_g_neg_near(&x.neg())
}

/// Clausen function `Cl₂(θ) = Σ sin(kθ)/k²`.
///
/// Uses `Cl₂(θ) = θ - θ ln θ + Σ |B_{2k}| θ^{2k+1} / (2k (2k+1)!)` on `(0, π]`
/// together with oddness and 2π-periodicity.
pub fn clausen2(theta: f64) -> f64 {
    if !theta.is_finite() {
        return f64::NAN;
    }
    let two_pi = 2.0 * PI;
    let mut th = theta.rem_euclid(two_pi);
    let mut sign = 1.0;
    if th > PI {
        th = two_pi - th;
        sign = -1.0;
    }
    if th == 0.0 {
        return 0.0;
    }
    let th2 = th * th;
    let mut sum = th - th * th.ln();
    let mut pow = th * th2;
    for c in &tables().clausen {
        let term = c * pow;
        sum += term;
        if term < 1e-18 {
            break;
        }
        pow *= th2;
    }
    sign * sum
}
