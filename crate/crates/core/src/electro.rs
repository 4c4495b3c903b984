//! Electrostatics of the limiting density: the total potential
//! `U = V/t - 2∫ ln|z - z'| ρ`, with `V = Re(z + log z)`, its constant values
//! on the two components, and the total energy.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::asympt::planar_f;
use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::spectral::{endpoints, SpectralCurve};

/// Per-integral budget for the potential quadratures.
pub const POTENTIAL_TOL: Tolerance = Tolerance {
    abs: 1e-10,
    rel: 1e-12,
    max_intervals: 4000,
};

/// `V(z) = Re z + ln|z|`.
pub fn external_v(z: Complex64) -> f64 {
    z.re + z.norm().ln()
}

fn guard_t(op: &'static str, t: f64) -> Result<()> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(op, format!("t = {t} must exceed 1")));
    }
    Ok(())
}

/// `Re g(z) = ∫ ln|z - z'| ρ(z') |dz'|` over interval, oval and atom.
pub fn log_potential(z: Complex64, curve: &SpectralCurve) -> Result<f64> {
    let on_interval = z.im == 0.0 && z.re >= curve.a && z.re <= curve.b;
    let breaks: Vec<f64> = if on_interval { vec![z.re] } else { Vec::new() };
    let interval = curve.interval_integral(|x| (z - x).norm().ln(), &breaks, POTENTIAL_TOL)?;
    let rest = if curve.has_atom() {
        z.norm().ln() / curve.t
    } else {
        let th = z.im.atan2(z.re).abs();
        curve.oval_integral(|w: Complex64| (z - w).norm().ln(), &[th], POTENTIAL_TOL)?
    };
    Ok(interval + rest)
}

/// Total potential `U(z) = V(z)/t - 2 Re g(z)`.
pub fn potential_u(z: Complex64, curve: &SpectralCurve) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("potential_U", "V is singular at 0"));
    }
    Ok(external_v(z) / curve.t - 2.0 * log_potential(z, curve)?)
}

/// `U` on `[a, b]`: `(2 - 1/t) - ln t - (1 - 1/t) ln(t - 1)`.
pub fn u_interval_closed(t: f64) -> Result<f64> {
    guard_t("u_interval_closed", t)?;
    Ok((2.0 - 1.0 / t) - t.ln() - (1.0 - 1.0 / t) * (t - 1.0).ln())
}

/// Closed form of `Re g(a)`.
pub fn re_g_at_a(t: f64) -> Result<f64> {
    guard_t("re_g_at_a", t)?;
    let (a, _) = endpoints(t)?;
    let s = a + 1.0 / a;
    let ln2 = std::f64::consts::LN_2;
    Ok((a - 1.0 / a - 2.0 * ln2 * s - (s - 2.0) * a.ln()
        + (s + 2.0) * (1.0 + a).ln()
        + (s - 2.0) * (1.0 - a).ln())
        / (4.0 * t))
}

/// `Re f(0) = -1 + (t-1) ln(t-1) - t ln t`.
pub fn re_f0_closed(t: f64) -> Result<f64> {
    guard_t("re_f0", t)?;
    Ok(-1.0 + (t - 1.0) * (t - 1.0).ln() - t * t.ln())
}

/// `ln a + ∫_0^a (√((a-x)(b-x)) - 1)/x dx` by quadrature.
fn re_f0_quadrature(t: f64) -> Result<f64> {
    let (a, b) = endpoints(t)?;
    // x = a(1 - u²) removes the square root at x = a.
    let est = integrate(
        |u: f64| {
            let x = a * (1.0 - u * u);
            (((a - x) * (b - x)).sqrt() - 1.0) / x * (2.0 * a * u)
        },
        0.0,
        1.0,
        POTENTIAL_TOL,
    )?;
    Ok(a.ln() + est.value)
}

/// `∫ V ρ |dz| = ln l + t - 2 + (1 - 1/t) ln(t - 1)`.
pub fn int_v_rho_closed(t: f64, l: f64) -> Result<f64> {
    guard_t("int_V_rho", t)?;
    Ok(l.ln() + t - 2.0 + (1.0 - 1.0 / t) * (t - 1.0).ln())
}

/// Quadrature and closed form of `∫ V ρ |dz|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntVRho {
    pub quadrature: f64,
    pub closed_form: f64,
}

pub fn int_v_rho(curve: &SpectralCurve) -> Result<IntVRho> {
    if curve.has_atom() {
        return Err(Error::domain("int_V_rho", "ln|z| diverges on the atom at the origin"));
    }
    let t = curve.t;
    // The derivation passes through Re f(0); check it before trusting the chain.
    let f0_quad = re_f0_quadrature(t)?;
    let f0 = re_f0_closed(t)?;
    if (f0_quad - f0).abs() > 1e-8 * f0.abs().max(1.0) {
        return Err(Error::Quadrature {
            estimate: (f0_quad - f0).abs(),
            tolerance: 1e-8,
        });
    }
    let interval = curve.interval_integral(|x| x + x.ln(), &[], POTENTIAL_TOL)?;
    let oval = curve.oval_integral(external_v, &[], POTENTIAL_TOL)?;
    Ok(IntVRho {
        quadrature: interval + oval,
        closed_form: int_v_rho_closed(t, curve.l)?,
    })
}

/// `E = -½ ln t + (3/2)(t-1)/t - ½((t-1)/t)² ln(t-1)`; independent of `l`.
pub fn total_energy(t: f64, _l: f64) -> Result<f64> {
    guard_t("total_energy", t)?;
    let s = (t - 1.0) / t;
    Ok(-0.5 * t.ln() + 1.5 * s - 0.5 * s * s * (t - 1.0).ln())
}

/// `E = (1/2t)∫Vρ + ½ U|[a,b] - (1/2t) ln l`.
pub fn energy_assembled(t: f64, l: f64, int_v_rho: f64, u_interval: f64) -> f64 {
    int_v_rho / (2.0 * t) + 0.5 * u_interval - l.ln() / (2.0 * t)
}

/// `E = (1/2t)∫Vρ + ½ Σ u_i Q_i`.
pub fn energy_double_counting(t: f64, int_v_rho: f64, components: &[(f64, f64)]) -> f64 {
    int_v_rho / (2.0 * t) + 0.5 * components.iter().map(|(u, q)| u * q).sum::<f64>()
}

/// Interior sample points of `[a, b]`.
pub fn interval_points(curve: &SpectralCurve, m: usize) -> Vec<f64> {
    (1..=m)
        .map(|k| {
            let th = PI * k as f64 / (m + 1) as f64;
            curve.a + 0.5 * (curve.b - curve.a) * (1.0 - th.cos())
        })
        .collect()
}

/// Points of the oval at `m` angles in `(0, π)`.
pub fn oval_points(curve: &SpectralCurve, m: usize) -> Result<Vec<Complex64>> {
    (1..=m)
        .map(|k| {
            let th = PI * k as f64 / (m + 1) as f64;
            curve.radial_point(th).map(|p| p.z)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElectroReport {
    pub t: f64,
    pub l: f64,
    #[serde(rename = "U_interval")]
    pub u_interval: f64,
    #[serde(rename = "U_interval_spread")]
    pub u_interval_spread: f64,
    #[serde(rename = "U_interval_closed")]
    pub u_interval_closed: f64,
    #[serde(rename = "U_oval")]
    pub u_oval: f64,
    #[serde(rename = "U_oval_spread")]
    pub u_oval_spread: f64,
    pub re_g_at_a: f64,
    pub re_g_at_a_quadrature: f64,
    pub energy: f64,
    pub energy_assembled: f64,
    pub energy_double_counting: f64,
    #[serde(rename = "intVrho")]
    pub int_v_rho: f64,
    #[serde(rename = "intVrho_closed")]
    pub int_v_rho_closed: f64,
    pub interval_charge: f64,
    pub oval_charge: f64,
    pub free_energy_relation_gap: f64,
}

fn mean_spread(v: &[f64]) -> (f64, f64) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    (mean, max - min)
}

/// Every electrostatic observable for one curve, with `samples` points per component.
pub fn report(curve: &SpectralCurve, samples: usize) -> Result<ElectroReport> {
    let t = curve.t;
    let l = curve.l;
    if curve.has_atom() {
        return Err(Error::domain("electro", "l must be positive"));
    }
    let u_int: Vec<f64> = interval_points(curve, samples)
        .into_iter()
        .map(|x| potential_u(Complex64::new(x, 0.0), curve))
        .collect::<Result<_>>()?;
    let u_ov: Vec<f64> = oval_points(curve, samples)?
        .into_iter()
        .map(|z| potential_u(z, curve))
        .collect::<Result<_>>()?;
    let (u_interval, u_interval_spread) = mean_spread(&u_int);
    let (u_oval, u_oval_spread) = mean_spread(&u_ov);
    let iv = int_v_rho(curve)?;
    let q_int = curve.interval_charge()?;
    let q_oval = curve.oval_charge()?;
    let energy = total_energy(t, l)?;
    let free = planar_f(t, l)?;
    Ok(ElectroReport {
        t,
        l,
        u_interval,
        u_interval_spread,
        u_interval_closed: u_interval_closed(t)?,
        u_oval,
        u_oval_spread,
        re_g_at_a: re_g_at_a(t)?,
        re_g_at_a_quadrature: log_potential(Complex64::new(curve.a, 0.0), curve)?,
        energy,
        energy_assembled: energy_assembled(t, l, iv.quadrature, u_interval),
        energy_double_counting: energy_double_counting(
            t,
            iv.quadrature,
            &[(u_interval, q_int), (u_oval, q_oval)],
        ),
        int_v_rho: iv.quadrature,
        int_v_rho_closed: iv.closed_form,
        interval_charge: q_int,
        oval_charge: q_oval,
        free_energy_relation_gap: (free - (energy - l.ln() * (1.0 - 1.0 / t))).abs(),
    })
}
