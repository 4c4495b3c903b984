//! Exact finite-n partition function `|Z_n(g)|`, by the orthogonal-polynomial
//! product `h_0^n ∏ r_k^{n-k}` and by the Barnes G closed form.

use serde::Serialize;

use crate::coupling::{Coupling, CouplingSequence};
use crate::dd::DoubleWord;
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_dd, log_barnes_g, log_barnes_g_pos, LogMagnitude, NearInteger};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Product,
    Barnes,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartitionValue {
    pub n: u64,
    pub g: f64,
    /// `ln|Z_n|`; `-inf` when `Z_n` vanishes.
    pub log_abs_z: f64,
    pub route: Route,
    #[serde(skip)]
    precise: DoubleWord,
}

impl PartitionValue {
    pub fn vanishes(&self) -> bool {
        self.log_abs_z == f64::NEG_INFINITY
    }

    /// `ln|Z_n|` in double-word precision (product route only; the Barnes
    /// route carries double precision).
    pub fn log_abs_z_dd(&self) -> DoubleWord {
        self.precise
    }

    /// `F_n = -ln|Z_n| / n²`; `None` when `Z_n = 0`.
    pub fn free_energy(&self) -> Option<f64> {
        if self.vanishes() {
            None
        } else {
            let n2 = DoubleWord::from_f64((self.n * self.n) as f64);
            Some((-self.precise / n2).to_f64())
        }
    }

    fn vanished(n: u64, g: f64, route: Route) -> Self {
        PartitionValue {
            n,
            g,
            log_abs_z: f64::NEG_INFINITY,
            route,
            precise: DoubleWord::from_f64(f64::NEG_INFINITY),
        }
    }
}

/// `ln|x|` in double-word for a near-integer argument.
fn ln_abs_dd(x: &NearInteger) -> DoubleWord {
    let v = x.value_dd();
    if v.hi == 0.0 {
        DoubleWord::from_f64(x.ln_abs_offset())
    } else {
        v.abs().ln()
    }
}

/// `ln|h_0|` in double-word: `ln|2 sin(π/g)| + (1 - 1/g) ln g + ln|Γ(1 - 1/g)|`.
fn ln_h0_dd(g: &Coupling) -> Option<DoubleWord> {
    let inv = g.inverse();
    if inv.is_integer() {
        return None;
    }
    let ln_inv = ln_abs_dd(inv);
    let one_minus = DoubleWord::ONE - inv.value_dd();
    // ln|2 sin(π/g)|
    let ln_sin = DoubleWord::LN2 + DoubleWord::from_f64(inv.ln_abs_sin_pi());
    // (1 - 1/g) ln g = -(1 - 1/g) ln(1/g)
    let power = -(one_minus * ln_inv);
    let ln_gamma = if one_minus.hi > 0.0 {
        ln_gamma_dd(one_minus)
    } else {
        // Γ(1-x) Γ(x) = π / sin(πx) with x = 1/g > 1.
        DoubleWord::LN_PI - DoubleWord::from_f64(inv.ln_abs_sin_pi()) - ln_gamma_dd(inv.value_dd())
    };
    Some(ln_sin + power + ln_gamma)
}

/// `ln|h_0(g)|`; zero-sign when `1/g` is an integer.
pub fn log_h0(g: &Coupling) -> LogMagnitude {
    match ln_h0_dd(g) {
        Some(v) => LogMagnitude::positive(v.to_f64()),
        None => LogMagnitude::ZERO,
    }
}

/// `ln|Z_n| = n ln|h_0| + Σ_{k<n} (n-k) ln|k g (k g - 1)|`, accumulated in double-word.
pub fn log_z_product(n: u64, g: &Coupling) -> Result<PartitionValue> {
    if n == 0 {
        return Err(Error::domain("log_z_product", "n must be positive"));
    }
    let Some(h0) = ln_h0_dd(g) else {
        return Ok(PartitionValue::vanished(n, g.g(), Route::Product));
    };
    let inv = g.inverse();
    let ln_g = -ln_abs_dd(inv);
    let two_ln_g = ln_g + ln_g;
    let mut acc = DoubleWord::from_f64(n as f64) * h0;
    // r_k = k g² (k - 1/g)
    for k in 1..n {
        let km = inv.neg().add_int(k as i64);
        let term = DoubleWord::from_f64(k as f64).ln() + two_ln_g + ln_abs_dd(&km);
        acc += DoubleWord::from_f64((n - k) as f64) * term;
    }
    Ok(PartitionValue {
        n,
        g: g.g(),
        log_abs_z: acc.to_f64(),
        route: Route::Product,
        precise: acc,
    })
}

/// `ln|Z_n| = n(n - 1/g) ln g + n ln|2 sin(π/g)| + ln G(n+1) + ln|G(n+1-1/g)| - ln|G(1-1/g)|`.
pub fn log_z_barnes(n: u64, g: &Coupling) -> Result<PartitionValue> {
    if n == 0 {
        return Err(Error::domain("log_z_barnes", "n must be positive"));
    }
    let inv = g.inverse();
    if inv.is_integer() {
        return Ok(PartitionValue::vanished(n, g.g(), Route::Barnes));
    }
    let nf = n as f64;
    let ln_g = -ln_abs_dd(inv).to_f64();
    let shifted_n = inv.neg().add_int(n as i64 + 1);
    let shifted_1 = inv.neg().add_int(1);
    let g_n1 = log_barnes_g_pos(nf + 1.0)?;
    let g_a = log_barnes_g(&shifted_n)?;
    let g_b = log_barnes_g(&shifted_1)?;
    if g_a.is_zero() || g_b.is_zero() {
        return Ok(PartitionValue::vanished(n, g.g(), Route::Barnes));
    }
    let power = nf * (nf - inv.value()) * ln_g;
    let sine = nf * (std::f64::consts::LN_2 + inv.ln_abs_sin_pi());
    let v = power + sine + g_n1.logabs + g_a.logabs - g_b.logabs;
    Ok(PartitionValue {
        n,
        g: g.g(),
        log_abs_z: v,
        route: Route::Barnes,
        precise: DoubleWord::from_f64(v),
    })
}

/// `|Δ| / max(1, |ln|Z||)` between the two routes.
pub fn route_gap(product: &PartitionValue, barnes: &PartitionValue) -> f64 {
    match (product.vanishes(), barnes.vanishes()) {
        (true, true) => 0.0,
        (false, false) => {
            let d = (product.log_abs_z - barnes.log_abs_z).abs();
            d / product.log_abs_z.abs().max(1.0)
        }
        _ => f64::INFINITY,
    }
}

/// `F_n = -ln|Z_n(g_n)| / n²` from the product route.
pub fn free_energy_n(n: u64, seq: &CouplingSequence) -> Result<f64> {
    let z = log_z_product(n, &seq.coupling(n))?;
    z.free_energy()
        .ok_or_else(|| Error::domain("free_energy_n", format!("Z_{n} vanishes")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub g_n: f64,
    #[serde(rename = "logabsZ_product")]
    pub log_abs_z_product: f64,
    #[serde(rename = "logabsZ_barnes")]
    pub log_abs_z_barnes: f64,
    #[serde(rename = "F_n")]
    pub free_energy: Option<f64>,
}

pub fn sweep(seq: &CouplingSequence, n_max: u64) -> Result<Vec<SweepRow>> {
    sweep_range(seq, 1, n_max)
}

/// Rows for `n_min <= n <= n_max`.
pub fn sweep_range(seq: &CouplingSequence, n_min: u64, n_max: u64) -> Result<Vec<SweepRow>> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::domain("sweep", format!("empty or invalid range {n_min}..={n_max}")));
    }
    (n_min..=n_max)
        .map(|n| {
            let g = seq.coupling(n);
            let p = log_z_product(n, &g)?;
            let b = log_z_barnes(n, &g)?;
            Ok(SweepRow {
                n,
                g_n: g.g(),
                log_abs_z_product: p.log_abs_z,
                log_abs_z_barnes: b.log_abs_z,
                free_energy: p.free_energy(),
            })
        })
        .collect()
}

/// CSV with columns `n,g_n,logabsZ_product,logabsZ_barnes,F_n`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("n,g_n,logabsZ_product,logabsZ_barnes,F_n\n");
    for r in rows {
        let f = r.free_energy.map(|f| format!("{f:e}")).unwrap_or_else(|| "nan".into());
        s.push_str(&format!(
            "{},{:e},{:e},{:e},{}\n",
            r.n, r.g_n, r.log_abs_z_product, r.log_abs_z_barnes, f
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn h0_at_g_two() {
        let g = Coupling::from_g(2.0).unwrap();
        let expect = (2.0 * 2f64.sqrt() * PI.sqrt()).ln();
        assert!((log_h0(&g).logabs - expect).abs() < 1e-15);
        assert!(log_h0(&Coupling::from_g(0.25).unwrap()).is_zero());
        assert!(log_h0(&Coupling::from_g(0.01 / 1.003).unwrap()).logabs.is_finite());
    }

    #[test]
    fn small_n_by_hand() {
        let g = Coupling::from_g(2.0).unwrap();
        let h0 = (2.0 * 2f64.sqrt() * PI.sqrt()).ln();
        let z1 = log_z_product(1, &g).unwrap();
        assert!((z1.log_abs_z - h0).abs() < 1e-15);
        let z2 = log_z_product(2, &g).unwrap();
        let expect = 2.0 * h0 + 2f64.ln();
        assert!((z2.log_abs_z - expect).abs() < 1e-14);
        let b2 = log_z_barnes(2, &g).unwrap();
        assert!((b2.log_abs_z - expect).abs() < 1e-12, "{}", b2.log_abs_z - expect);
    }
}
