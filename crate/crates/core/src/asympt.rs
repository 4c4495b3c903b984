//! Planar free energy, large-n expansion coefficients for the shifted family
//! `1/g_n = n/t + α`, the double-scaling functions and Euler characteristics.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::coupling::residue_class;
use crate::error::{Error, Result};
use crate::specfun::{clausen2, zeta_prime_minus1, BernoulliTable};

/// `F(t, l) = H(t-1)(1/t - 1) ln l - ½ ln t + (3/2)(t-1)/t - ½((t-1)/t)² ln|t-1|`.
pub fn planar_f(t: f64, l: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("planar_F", format!("t = {t} must be positive")));
    }
    if t == 1.0 {
        return Err(Error::domain("planar_F", "t = 1 is the critical point"));
    }
    let s = (t - 1.0) / t;
    let base = -0.5 * t.ln() + 1.5 * s - 0.5 * s * s * (t - 1.0).abs().ln();
    if t > 1.0 {
        if !(l >= 0.0 && l <= 1.0) {
            return Err(Error::domain("planar_F", format!("l = {l} must lie in [0, 1]")));
        }
        // l = 0 gives +inf here: (1/t - 1) < 0 times ln 0 = -inf.
        Ok((1.0 / t - 1.0) * l.ln() + base)
    } else {
        Ok(base)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    AboveOne { p: u64, q: u64 },
    BelowOne,
}

/// `j`-dependent parts of `F_1` and `F_2` for one residue class `j = nq mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Oscillation {
    pub j: u64,
    pub f1: f64,
    pub f2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionTable {
    pub t: f64,
    pub alpha: f64,
    pub k_max: usize,
    pub regime: Regime,
    /// `F_0..F_K`; for `t > 1` the entries 1 and 2 omit the oscillatory parts.
    pub coeffs: Vec<f64>,
    pub oscillatory: Vec<Oscillation>,
}

/// The `k >= 3` coefficient, shared by both regimes.
pub fn general_coefficient(k: usize, t: f64, alpha: f64) -> f64 {
    assert!(k >= 3);
    let b = BernoulliTable::shared();
    let kf = k as f64;
    let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
    let mut s = sign * alpha.powi(k as i32) * t.powi(k as i32 - 1) * ((kf - 1.0) * t + 1.0)
        / (kf * (kf - 1.0))
        - b.get_f64(k) / (kf * (kf - 2.0));
    let mut inner = 0.0;
    for j in 2..=k / 2 {
        let jj = 2 * j;
        inner += b.get_f64(jj) / (jj as f64 * (jj as f64 - 2.0))
            * binomial(k - 3, jj - 3)
            * alpha.powi((k - jj) as i32);
    }
    inner += -alpha.powi(k as i32) / (kf * (kf - 1.0) * (kf - 2.0))
        + alpha.powi(k as i32 - 2) / (12.0 * (kf - 2.0));
    let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
    s -= t.powi(k as i32 - 2) * (1.0 / (t - 1.0).powi(k as i32 - 2) - parity) * inner;
    s
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn lattice_check(alpha: f64, p: u64) -> Result<()> {
    let x = alpha * p as f64;
    if (x - x.round()).abs() < 1e-12 {
        return Err(Error::domain(
            "expansion_coeffs",
            format!("alpha = {alpha} lies on the lattice k/{p}"),
        ));
    }
    Ok(())
}

/// Coefficients `F_0..F_K` of `-ln|Z_n| ~ (1/12) ln n + Σ n^{2-k} F_k`.
pub fn expansion_coeffs(t: f64, alpha: f64, k_max: usize, regime: Regime) -> Result<ExpansionTable> {
    if !alpha.is_finite() {
        return Err(Error::domain("expansion_coeffs", "alpha must be finite"));
    }
    let mut coeffs = Vec::with_capacity(k_max + 1);
    let mut oscillatory = Vec::new();
    let s = (t - 1.0) / t;
    match regime {
        Regime::AboveOne { p, q } => {
            if p == 0 || q == 0 || p <= q {
                return Err(Error::domain("expansion_coeffs", "above_one needs t = p/q > 1"));
            }
            if ((p as f64 / q as f64) - t).abs() > 1e-12 * t {
                return Err(Error::domain("expansion_coeffs", "t does not equal p/q"));
            }
            lattice_check(alpha, p)?;
            let lt = (t - 1.0).ln();
            coeffs.push(-0.5 * t.ln() + 1.5 * s - 0.5 * s * s * lt);
            coeffs.push(-(2.0 * PI).ln() - alpha * (2.0 - t - s * lt));
            coeffs.push(-zeta_prime_minus1() + lt / 12.0 - 0.5 * alpha * alpha * (t * (t + 1.0) + lt));
            for j in 0..p {
                let arg = j as f64 / p as f64 + alpha;
                let ln_s = (2.0 * (PI * arg).sin().abs()).ln();
                oscillatory.push(Oscillation {
                    j,
                    f1: -s * ln_s,
                    f2: alpha * ln_s + clausen2(2.0 * PI * arg) / (2.0 * PI),
                });
            }
        }
        Regime::BelowOne => {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::domain("expansion_coeffs", "below_one needs 0 < t < 1"));
            }
            let lt = (1.0 - t).ln();
            coeffs.push(-0.5 * t.ln() + 1.5 * s - 0.5 * s * s * lt);
            coeffs.push(-(2.0 * PI).ln() - alpha * (2.0 - t - s * lt));
            coeffs.push(-zeta_prime_minus1() + lt / 12.0 - 0.5 * alpha * alpha * (t * (t + 1.0) + lt));
        }
    }
    coeffs.truncate(k_max + 1);
    for k in 3..=k_max {
        coeffs.push(general_coefficient(k, t, alpha));
    }
    Ok(ExpansionTable {
        t,
        alpha,
        k_max,
        regime,
        coeffs,
        oscillatory,
    })
}

impl ExpansionTable {
    /// Full coefficients at a given `n`, oscillatory parts included.
    pub fn coefficients_at(&self, n: u64) -> Vec<f64> {
        let mut c = self.coeffs.clone();
        if let Regime::AboveOne { p, q } = self.regime {
            let o = self.oscillatory[residue_class(n, p, q) as usize];
            if c.len() > 1 {
                c[1] += o.f1;
            }
            if c.len() > 2 {
                c[2] += o.f2;
            }
        }
        c
    }

    /// `(1/12) ln n + Σ_{k<=K} n^{2-k} F_k`.
    pub fn predict(&self, n: u64) -> f64 {
        let nf = n as f64;
        let c = self.coefficients_at(n);
        let mut acc = crate::dd::CompensatedSum::new();
        acc.add(nf.ln() / 12.0);
        for (k, f) in c.iter().enumerate() {
            acc.add(f * nf.powi(2 - k as i32));
        }
        acc.value()
    }
}

/// `χ_{j,s} = (-1)^s B_{2j} / (2j(2j-2)) · C(2j-3+s, s)`.
pub fn euler_char(j: usize, s: usize) -> Result<BigRational> {
    if j < 2 {
        return Err(Error::domain("euler_char", "genus must be at least 2"));
    }
    let table = if 2 * j <= BernoulliTable::shared().max_index() {
        None
    } else {
        Some(BernoulliTable::new(2 * j))
    };
    let b = table.as_ref().unwrap_or(BernoulliTable::shared()).get(2 * j).clone();
    let denom = BigInt::from(2 * j) * BigInt::from(2 * j - 2);
    let mut binom = BigInt::one();
    for i in 0..s {
        binom = binom * BigInt::from(2 * j - 2 + i) / BigInt::from(i + 1);
    }
    let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(b * BigRational::new(sign * binom, denom))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusTerm {
    pub j: usize,
    /// `Σ_{s<=S} (-1)^{s+1} χ_{j,s} τ^s`.
    pub partial_sum: f64,
    /// Bound on the neglected tail.
    pub tail_bound: f64,
    /// The resummed value `-χ_{j,0} (1-τ)^{2-2j}`.
    pub resummed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleScaling {
    pub mu: f64,
    pub tau: f64,
    pub f: f64,
    pub genus: Vec<GenusTerm>,
    /// `f + Σ_j μ^{2-2j} F_j(τ)` with the partial sums.
    pub total: f64,
}

/// `f(μ, τ) = (μ²/4)(3τ² - 2τ - 2(1-τ)² ln(1-τ)) + (1/12) ln(1-τ)`.
pub fn double_scaling_f(mu: f64, tau: f64) -> Result<f64> {
    if !(tau.abs() < 1.0) {
        return Err(Error::domain("double_scaling", format!("|tau| = {} must be < 1", tau.abs())));
    }
    let l = (-tau).ln_1p();
    Ok(0.25 * mu * mu * (3.0 * tau * tau - 2.0 * tau - 2.0 * (1.0 - tau).powi(2) * l) + l / 12.0)
}

/// Genus terms `F_j(τ)` for `2 <= j <= J`, each summed to `s_max` terms.
pub fn double_scaling(mu: f64, tau: f64, j_max: usize, s_max: usize) -> Result<DoubleScaling> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::domain("double_scaling", "mu must be nonzero"));
    }
    let f = double_scaling_f(mu, tau)?;
    let mut genus = Vec::new();
    let mut total = f;
    for j in 2..=j_max {
        let chi0 = euler_char(j, 0)?.to_f64().unwrap_or(f64::NAN);
        let m = 2 * j - 3;
        // -(−1)^s χ_{j,s} = -χ_{j,0} C(m+s, s) τ^s
        let mut term = -chi0;
        let mut partial = 0.0;
        for s in 0..=s_max {
            if s > 0 {
                term *= (m + s) as f64 / s as f64 * tau;
            }
            partial += term;
        }
        let next = term * (m + s_max + 1) as f64 / (s_max + 1) as f64 * tau;
        let ratio = (m + s_max + 2) as f64 / (s_max + 2) as f64 * tau.abs();
        let tail_bound = if ratio < 1.0 {
            next.abs() / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        let resummed = -chi0 * (1.0 - tau).powi(2 - 2 * j as i32);
        total += mu.powi(2 - 2 * j as i32) * partial;
        genus.push(GenusTerm {
            j,
            partial_sum: partial,
            tail_bound,
            resummed,
        });
    }
    Ok(DoubleScaling {
        mu,
        tau,
        f,
        genus,
        total,
    })
}

/// CSV rows `j,s,numerator,denominator`.
pub fn euler_csv(j_max: usize, s_max: usize) -> Result<String> {
    let mut out = String::from("j,s,numerator,denominator\n");
    for j in 2..=j_max {
        for s in 0..=s_max {
            let x = euler_char(j, s)?;
            out.push_str(&format!("{},{},{},{}\n", j, s, x.numer(), x.denom()));
        }
    }
    Ok(out)
}

/// `χ_{j,s+1} / χ_{j,s}`, exact.
pub fn euler_ratio(j: usize, s: usize) -> Result<BigRational> {
    let a = euler_char(j, s)?;
    if a.is_zero() {
        return Err(Error::domain("euler_ratio", "zero denominator"));
    }
    Ok(euler_char(j, s + 1)? / a)
}

/// Sign of an exact rational as `-1`, `0` or `1`.
pub fn rational_sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_value_at_sqrt3() {
        let f = planar_f(3f64.sqrt(), (-1.0f64 / 7.0).exp()).unwrap();
        assert!((f - 0.447_559).abs() < 1e-6, "{f}");
        assert!(planar_f(1.0, 0.5).is_err());
        let below = 1.0 / 3f64.sqrt();
        assert_eq!(planar_f(below, 0.3).unwrap(), planar_f(below, 0.9).unwrap());
    }

    #[test]
    fn euler_examples() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(euler_char(2, 0).unwrap(), r(-1, 240));
        assert_eq!(euler_char(3, 0).unwrap(), r(1, 1008));
        assert_eq!(euler_char(2, 1).unwrap(), r(1, 120));
    }

    #[test]
    fn tau_outside_unit_disc() {
        assert!(double_scaling(2.0, 1.0, 4, 10).is_err());
        assert_eq!(double_scaling_f(3.0, 0.0).unwrap(), 0.0);
    }
}
