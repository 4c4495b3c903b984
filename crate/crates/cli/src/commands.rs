//! One function per subcommand; each returns the rendered output.

use anyhow::{bail, Result};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use penner::asympt::{double_scaling, euler_char, euler_csv, expansion_coeffs, planar_f, Regime};
use penner::electro::{report, total_energy};
use penner::laguerre::LaguerreSpec;
use penner::partition::{log_z_barnes, log_z_product, route_gap, sweep_csv, sweep_range};
use penner::spectral::SpectralCurve;

use crate::config::{Format, Params};

/// Rendered output plus a one-line note for stderr.
pub struct Output {
    pub body: String,
    pub note: Option<String>,
    /// Extra files written next to `--out`, as (suffix, content).
    pub side: Vec<(String, String)>,
}

impl Output {
    fn plain(body: String) -> Self {
        Output {
            body,
            note: None,
            side: Vec::new(),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

const BAND: f64 = 1e-2;

fn support_csv(curve: &SpectralCurve) -> String {
    let mut s = String::from("component,re,im\n");
    s.push_str(&format!("interval,{:e},0e0\ninterval,{:e},0e0\n", curve.a, curve.b));
    if curve.has_atom() {
        s.push_str("origin_atom,0e0,0e0\n");
    }
    for z in &curve.oval {
        s.push_str(&format!("oval,{:e},{:e}\n", z.re, z.im));
    }
    s
}

fn support_json(curve: &SpectralCurve) -> serde_json::Value {
    json!({
        "t": curve.t,
        "l": curve.l,
        "a": curve.a,
        "b": curve.b,
        "atom": curve.has_atom(),
        "oval": curve.oval.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    })
}

pub fn zeros(p: &Params) -> Result<Output> {
    let seq = p.sequence()?;
    let n = p.n_value();
    let g = seq.coupling(n);
    let zs = LaguerreSpec::for_coupling(n as usize, &g)?.find_zeros()?;
    let t = p.t_value()?;
    let curve = if t > 1.0 {
        match p.l_value() {
            Ok(l) => Some(SpectralCurve::new(t, l)?),
            Err(_) => None,
        }
    } else {
        None
    };
    let count = curve.as_ref().map(|c| zs.count_near_interval(c.a, c.b, BAND));
    let note = match (&curve, count) {
        (Some(c), Some(k)) => Some(format!(
            "{k} of {n} zeros on [a, b] = [{:.4}, {:.4}] within {BAND}",
            c.a, c.b
        )),
        _ => Some("no limiting support for these parameters; zeros only".into()),
    };
    match p.format_or(Format::Csv) {
        Format::Csv => Ok(Output {
            body: zs.to_csv(),
            note,
            side: curve.iter().map(|c| ("support.csv".to_string(), support_csv(c))).collect(),
        }),
        Format::Json => {
            let v = json!({
                "n": n,
                "g": g.g(),
                "zeros": zs.zeros.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "residuals": zs.residuals,
                "sweeps": zs.sweeps,
                "on_interval": count,
                "support": curve.as_ref().map(support_json),
            });
            Ok(Output {
                body: to_json(&v)?,
                note,
                side: Vec::new(),
            })
        }
    }
}

fn curve(p: &Params) -> Result<SpectralCurve> {
    Ok(SpectralCurve::new(p.t_value()?, p.l_value()?)?)
}

pub fn support(p: &Params) -> Result<Output> {
    let c = curve(p)?;
    Ok(Output::plain(match p.format_or(Format::Csv) {
        Format::Csv => support_csv(&c),
        Format::Json => to_json(&support_json(&c))?,
    }))
}

pub fn density(p: &Params) -> Result<Output> {
    let c = curve(p)?;
    let m = p.samples.unwrap_or(200);
    Ok(Output::plain(match p.format_or(Format::Csv) {
        Format::Csv => c.to_csv(m)?,
        Format::Json => {
            let rows: Vec<_> = c
                .samples(m)?
                .into_iter()
                .map(|s| json!({"component": s.component, "re": s.point.re, "im": s.point.im, "weight": s.weight}))
                .collect();
            to_json(&json!({
                "t": c.t,
                "l": c.l,
                "interval_charge": c.interval_charge()?,
                "oval_charge": c.oval_charge()?,
                "samples": rows,
            }))?
        }
    }))
}

pub fn electro(p: &Params) -> Result<Output> {
    let c = curve(p)?;
    let r = report(&c, p.samples.unwrap_or(10))?;
    Ok(Output::plain(match p.format_or(Format::Json) {
        Format::Json => to_json(&r)?,
        Format::Csv => {
            let v = serde_json::to_value(r)?;
            let mut s = String::from("quantity,value\n");
            if let Some(map) = v.as_object() {
                for (k, x) in map {
                    s.push_str(&format!("{k},{x}\n"));
                }
            }
            s
        }
    }))
}

fn n_range(p: &Params, default_max: u64) -> (u64, u64) {
    match (p.n, p.n_max) {
        (Some(n), Some(m)) => (n, m),
        (Some(n), None) => (n, n),
        (None, Some(m)) => (1, m),
        (None, None) => (1, default_max),
    }
}

pub fn partition(p: &Params) -> Result<Output> {
    let seq = p.sequence()?;
    let (lo, hi) = n_range(p, 60);
    let rows = sweep_range(&seq, lo, hi)?;
    let worst = (lo..=hi)
        .map(|n| {
            let g = seq.coupling(n);
            Ok(route_gap(&log_z_product(n, &g)?, &log_z_barnes(n, &g)?))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let note = Some(format!("worst relative route gap {worst:.2e}"));
    let body = match p.format_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    Ok(Output {
        body,
        note,
        side: Vec::new(),
    })
}

pub fn fsweep(p: &Params) -> Result<Output> {
    let seq = p.sequence()?;
    let (lo, hi) = n_range(p, 200);
    let rows = sweep_range(&seq, lo, hi)?;
    let t = p.t_value()?;
    // The limit line needs l only above t = 1.
    let limit = if t > 1.0 {
        p.l_value().ok().map(|l| planar_f(t, l)).transpose()?
    } else {
        Some(planar_f(t, 1.0)?)
    };
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_else(|| "nan".into());
    Ok(Output::plain(match p.format_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n,g_n,F_n,F_limit\n");
            for r in &rows {
                s.push_str(&format!("{},{:e},{},{}\n", r.n, r.g_n, fmt(r.free_energy), fmt(limit)));
            }
            s
        }
        Format::Json => to_json(&json!({
            "sequence": seq,
            "limit": limit,
            "rows": rows.iter().map(|r| json!({"n": r.n, "g_n": r.g_n, "F_n": r.free_energy})).collect::<Vec<_>>(),
        }))?,
    }))
}

pub fn expansion(p: &Params) -> Result<Output> {
    let t = p.t_value()?;
    let alpha = p.alpha.unwrap_or(0.3);
    let k = p.k.unwrap_or(4);
    let regime = if t > 1.0 {
        match p.thooft()?.as_ratio() {
            Some((pp, qq)) => Regime::AboveOne { p: pp, q: qq },
            None => bail!("t > 1 needs an exact ratio: pass --p and --q"),
        }
    } else {
        Regime::BelowOne
    };
    let table = expansion_coeffs(t, alpha, k, regime)?;
    Ok(Output::plain(match p.format_or(Format::Json) {
        Format::Json => to_json(&table)?,
        Format::Csv => {
            // F_1 and F_2 carry a residue-class part above t = 1: one row per class.
            let mut s = String::from("k,residue,value\n");
            for (i, c) in table.coeffs.iter().enumerate() {
                if (i == 1 || i == 2) && !table.oscillatory.is_empty() {
                    for o in &table.oscillatory {
                        let v = c + if i == 1 { o.f1 } else { o.f2 };
                        s.push_str(&format!("{i},{},{v:e}\n", o.j));
                    }
                } else {
                    s.push_str(&format!("{i},,{c:e}\n"));
                }
            }
            s
        }
    }))
}

pub fn euler(p: &Params) -> Result<Output> {
    let j = p.j_max.unwrap_or(6);
    let s = p.s_max.unwrap_or(10);
    Ok(Output::plain(match p.format_or(Format::Csv) {
        Format::Csv => euler_csv(j, s)?,
        Format::Json => {
            let mut rows = Vec::new();
            for jj in 2..=j {
                for ss in 0..=s {
                    let x = euler_char(jj, ss)?;
                    rows.push(json!({"j": jj, "s": ss, "numerator": x.numer().to_string(), "denominator": x.denom().to_string()}));
                }
            }
            to_json(&rows)?
        }
    }))
}

pub fn dscale(p: &Params) -> Result<Output> {
    let (mu, tau) = match (p.mu, p.tau) {
        (Some(mu), Some(tau)) => (mu, tau),
        (mu, tau) => {
            // μ = (t-1)n and τ = α/μ from the sequence parameters.
            let mu = mu.unwrap_or((p.t_value()? - 1.0) * p.n_value() as f64);
            (mu, tau.unwrap_or(p.alpha.unwrap_or(0.3) / mu))
        }
    };
    let ds = double_scaling(mu, tau, p.j_max.unwrap_or(6), p.s_max.unwrap_or(40))?;
    Ok(Output::plain(match p.format_or(Format::Json) {
        Format::Json => to_json(&ds)?,
        Format::Csv => {
            let mut s = String::from("j,partial_sum,tail_bound,resummed\n");
            for g in &ds.genus {
                s.push_str(&format!("{},{:e},{:e},{:e}\n", g.j, g.partial_sum, g.tail_bound, g.resummed));
            }
            s
        }
    }))
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub t: f64,
    pub l: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// The invariant suite. Returns the report; the caller maps failure to the exit code.
pub fn verify(p: &Params) -> Result<(Output, bool)> {
    let t = p.t_value()?;
    let l = p.l.unwrap_or((-1.0f64 / 7.0).exp());
    let curve = SpectralCurve::new(t, l)?;
    let mut checks = Vec::new();
    let mut add = |name: &str, value: f64, default_tol: f64| {
        let tolerance = p.tol.unwrap_or(default_tol);
        checks.push(Check {
            name: name.to_string(),
            value,
            tolerance,
            passed: value.abs() <= tolerance && value.is_finite(),
        });
    };

    let seq = p.sequence()?;
    let mut gap: f64 = 0.0;
    for n in 1..=p.n_max.unwrap_or(100) {
        let g = seq.coupling(n);
        gap = gap.max(route_gap(&log_z_product(n, &g)?, &log_z_barnes(n, &g)?));
    }
    add("partition route gap", gap, 1e-8);

    let qi = curve.interval_charge()?;
    let qo = curve.oval_charge()?;
    add("interval charge - (1 - 1/t)", qi - (1.0 - 1.0 / t), 1e-6);
    add("oval charge - 1/t", qo - 1.0 / t, 1e-6);

    let r = report(&curve, p.samples.unwrap_or(10))?;
    add("U on [a,b] - closed form", r.u_interval - r.u_interval_closed, 1e-5);
    add("U spread on [a,b]", r.u_interval_spread, 1e-5);
    add("U spread on oval", r.u_oval_spread, 1e-5);
    add("U(oval) - U([a,b]) + ln l", r.u_oval - r.u_interval + l.ln(), 1e-4);
    add("int V rho - closed form", r.int_v_rho - r.int_v_rho_closed, 1e-5);
    add("energy - assembled", r.energy - r.energy_assembled, 1e-5);
    add("energy - double counting", r.energy - r.energy_double_counting, 1e-5);
    add(
        "planar F - E + (1 - 1/t) ln l",
        planar_f(t, l)? - total_energy(t, l)? + (1.0 - 1.0 / t) * l.ln(),
        1e-12,
    );
    let sd = curve.sd_identity_residual(Complex64::new(0.0, 2.0))?;
    add("Schwinger-Dyson residual at 2i", sd, 1e-6);
    let mid = 0.5 * (curve.a + curve.b);
    add("jump mismatch at mid-interval", curve.jump_mismatch(mid, 1e-6)?, 1e-4);

    let chi = |j, s| euler_char(j, s).map(|x| x.to_f64().unwrap_or(f64::NAN));
    add("chi_{2,0} + 1/240", chi(2, 0)? + 1.0 / 240.0, 0.0);
    add("chi_{3,0} - 1/1008", chi(3, 0)? - 1.0 / 1008.0, 0.0);
    add("chi_{2,1} - 1/120", chi(2, 1)? - 1.0 / 120.0, 0.0);

    let passed = checks.iter().all(|c| c.passed);
    let rep = VerifyReport { t, l, passed, checks };
    let body = match p.format_or(Format::Json) {
        Format::Json => to_json(&rep)?,
        Format::Csv => {
            let mut s = String::from("name,value,tolerance,passed\n");
            for c in &rep.checks {
                s.push_str(&format!("\"{}\",{:e},{:e},{}\n", c.name, c.value, c.tolerance, c.passed));
            }
            s
        }
    };
    let failed = rep.checks.iter().filter(|c| !c.passed).count();
    let note = Some(if passed {
        format!("all {} checks passed", rep.checks.len())
    } else {
        format!("{failed} of {} checks failed", rep.checks.len())
    });
    Ok((
        Output {
            body,
            note,
            side: Vec::new(),
        },
        passed,
    ))
}
