//! Limiting spectral data for `t > 1`: the interval `[a, b]`, the oval `C_l`
//! given by `Re ∫_a^z r(z')/z' dz' = -t ln l`, and the density on both.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_pieces, integrate_segment, QuadValue, Tolerance};

/// Close to machine precision; used for phi and the oval geometry.
const PHI_TOL: Tolerance = Tolerance {
    abs: 1e-13,
    rel: 1e-13,
    max_intervals: 2000,
};

/// Default budget for the density integrals.
pub const DENSITY_TOL: Tolerance = Tolerance {
    abs: 1e-11,
    rel: 1e-11,
    max_intervals: 4000,
};

/// Largest polyline step as a fraction of `b - a`.
pub const STEP_FRACTION: f64 = 0.02;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(a, b)` with `a = 2t - 1 - 2√(t(t-1))` and `b = 1/a`.
pub fn endpoints(t: f64) -> Result<(f64, f64)> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain("endpoints", format!("t = {t} must exceed 1")));
    }
    // b has no cancellation; a follows from ab = 1.
    let b = 2.0 * t - 1.0 + 2.0 * (t * (t - 1.0)).sqrt();
    Ok((1.0 / b, b))
}

#[inline]
fn branch_r(z: Complex64, a: f64, b: f64) -> Complex64 {
    (z - a).sqrt() * (z - b).sqrt()
}

/// `√((z-a)(z-b))` on the plane cut along `[a, b]`, normalized by `r(z) ~ z`.
pub fn r_of_z(z: Complex64, t: f64) -> Result<Complex64> {
    let (a, b) = endpoints(t)?;
    if z.im == 0.0 && z.re >= a && z.re <= b {
        return Err(Error::domain("r_of_z", format!("{z} lies on the cut")));
    }
    Ok(branch_r(z, a, b))
}

/// Interval density `√((x-a)(b-x)) / (2π t x)`.
pub fn density_interval(x: f64, t: f64) -> Result<f64> {
    let (a, b) = endpoints(t)?;
    if x < a || x > b {
        return Err(Error::domain("density_interval", format!("x = {x} outside [a, b]")));
    }
    Ok(((x - a) * (b - x)).sqrt() / (2.0 * PI * t * x))
}

/// Oval density with respect to arclength, `Re[r(z) τ / (2πi t z)]` for the
/// unit tangent `τ` in clockwise orientation.
pub fn density_oval(z: Complex64, tangent: Complex64, t: f64) -> Result<f64> {
    let r = r_of_z(z, t)?;
    let w = (r * tangent / (c(0.0, 2.0 * PI * t) * z)).re;
    if w < -1e-10 {
        return Err(Error::domain(
            "density_oval",
            format!("negative weight {w:e}: tangent orientation or branch is wrong"),
        ));
    }
    Ok(w.max(0.0))
}

/// `Re ∫_a^z r(z')/z' dz'` for the endpoints `(a, b)`.
fn phi_ab(z: Complex64, a: f64, b: f64) -> Result<f64> {
    if z.im == 0.0 && (z.re == 0.0 || (z.re > a && z.re <= b)) {
        return Err(Error::domain("phi", format!("{z} is on the cut or at 0")));
    }
    if z == c(a, 0.0) {
        return Ok(0.0);
    }
    // Real symmetry: work in the closed upper half-plane.
    let w = if z.im < 0.0 { z.conj() } else { z };
    let h = w.im.max(0.5 * (b - a).min(1.0));
    // a → a + ih with s = a + iu², which removes the square-root endpoint.
    let leg1 = integrate(
        |u: f64| {
            let s = c(a, u * u);
            branch_r(s, a, b) / s * c(0.0, 2.0 * u)
        },
        0.0,
        h.sqrt(),
        PHI_TOL,
    )?
    .value;
    let start = c(a, h);
    let leg2 = integrate_segment(|s| regular_part(s, a, b), start, w, PHI_TOL)?;
    Ok((leg1 + leg2).re + pole_part(start, w))
}

/// `(r(s) - r(0))/s`, bounded at the origin.
#[inline]
fn regular_part(s: Complex64, a: f64, b: f64) -> Complex64 {
    (branch_r(s, a, b) + 1.0) / s
}

/// `Re ∫ r(0)/s ds` from `from` to `to`.
#[inline]
fn pole_part(from: Complex64, to: Complex64) -> f64 {
    from.norm().ln() - to.norm().ln()
}

/// `Re ∫_a^z r(z')/z' dz'` along a path avoiding the cut and the origin.
pub fn phi(z: Complex64, t: f64) -> Result<f64> {
    let (a, b) = endpoints(t)?;
    phi_ab(z, a, b)
}

/// The analytic derivative `r(z)/z` of the function whose real part is phi.
#[inline]
fn dphi(z: Complex64, a: f64, b: f64) -> Complex64 {
    branch_r(z, a, b) / z
}

/// Which part of the support a sample belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Interval,
    Oval,
    OriginAtom,
}

impl Component {
    pub fn as_str(&self) -> &'static str {
        match self {
            Component::Interval => "interval",
            Component::Oval => "oval",
            Component::OriginAtom => "origin_atom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensitySample {
    pub point: Complex64,
    /// Density with respect to `|dz|`; for the atom, its mass.
    pub weight: f64,
    pub component: Component,
}

/// A point on the radially parametrized oval `z(θ) = ρ(θ) e^{iθ}`.
#[derive(Clone, Copy, Debug)]
pub struct OvalPoint {
    pub theta: f64,
    pub z: Complex64,
    /// `dz/dθ`.
    pub dz: Complex64,
    /// Density per unit `θ` (counterclockwise `θ`, clockwise measure).
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralCurve {
    pub t: f64,
    pub l: f64,
    pub a: f64,
    pub b: f64,
    /// Clockwise, starting and ending at the right real crossing.
    pub oval: Vec<Complex64>,
    /// Upper arc from the left crossing to the right one, with tracked phi values.
    #[serde(skip)]
    upper: Vec<(Complex64, f64)>,
}

/// Trace `C_l` for `0 < l <= 1`.
pub fn trace_oval(t: f64, l: f64) -> Result<SpectralCurve> {
    if !(l > 0.0 && l <= 1.0) {
        return Err(Error::domain("trace_oval", format!("l = {l} must lie in (0, 1]")));
    }
    SpectralCurve::new(t, l)
}

impl SpectralCurve {
    /// Spectral data for `l ∈ [0, 1]`; `l = 0` carries an atom of mass `1/t` at 0.
    pub fn new(t: f64, l: f64) -> Result<Self> {
        let (a, b) = endpoints(t)?;
        if !(0.0..=1.0).contains(&l) {
            return Err(Error::domain("spectral", format!("l = {l} must lie in [0, 1]")));
        }
        let mut curve = SpectralCurve {
            t,
            l,
            a,
            b,
            oval: Vec::new(),
            upper: Vec::new(),
        };
        if l > 0.0 {
            curve.trace()?;
        }
        Ok(curve)
    }

    pub fn has_atom(&self) -> bool {
        self.l == 0.0
    }

    /// `-t ln l`.
    pub fn level(&self) -> f64 {
        -self.t * self.l.ln()
    }

    pub fn phi(&self, z: Complex64) -> Result<f64> {
        phi_ab(z, self.a, self.b)
    }

    pub fn r(&self, z: Complex64) -> Complex64 {
        branch_r(z, self.a, self.b)
    }

    fn grad(&self, z: Complex64) -> Complex64 {
        dphi(z, self.a, self.b)
    }

    /// Clockwise unit tangent at a point of the oval.
    pub fn tangent(&self, z: Complex64) -> Complex64 {
        let g = self.grad(z).conj();
        c(0.0, 1.0) * g / g.norm()
    }

    /// `phi(to) - phi(from)` along the straight segment.
    fn phi_increment(&self, from: Complex64, to: Complex64) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        Ok(integrate_segment(|s| regular_part(s, a, b), from, to, PHI_TOL)?.re + pole_part(from, to))
    }

    /// The root of `phi(x) = level` on the negative axis, where phi rises
    /// monotonically from -∞ to +∞.
    fn seed(&self) -> Result<f64> {
        let level = self.level();
        let mut lo = -1.0;
        let mut f_lo = self.phi(c(lo, 0.0))?;
        let mut guard = 0;
        while f_lo >= level {
            lo *= 2.0;
            let f = self.phi(c(lo, 0.0))?;
            if f > f_lo {
                return Err(Error::Tracing("phi not monotone on the negative axis".into()));
            }
            f_lo = f;
            guard += 1;
            if guard > 200 {
                return Err(Error::Tracing("no seed below the level".into()));
            }
        }
        let mut hi = lo / 2.0;
        let mut f_hi = self.phi(c(hi, 0.0))?;
        guard = 0;
        while f_hi <= level {
            hi /= 2.0;
            let f = self.phi(c(hi, 0.0))?;
            if f < f_hi {
                return Err(Error::Tracing("phi not monotone on the negative axis".into()));
            }
            f_hi = f;
            guard += 1;
            if guard > 1000 {
                return Err(Error::Tracing("no seed above the level".into()));
            }
        }
        self.bisect_real(lo, hi, level, 1.0)
    }

    /// Bisection for `phi(x) = level` on `[lo, hi]`, with phi increasing
    /// (`dir = 1`) or decreasing (`dir = -1`).
    fn bisect_real(&self, mut lo: f64, mut hi: f64, level: f64, dir: f64) -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo.min(hi) || mid >= lo.max(hi) {
                break;
            }
            let f = self.phi(c(mid, 0.0))? - level;
            if f * dir < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() <= 1e-15 * mid.abs() {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Predictor–corrector tracing of the upper arc, then mirror.
    fn trace(&mut self) -> Result<()> {
        let level = self.level();
        let hmax = STEP_FRACTION * (self.b - self.a);
        let touches_a = self.l == 1.0;
        let x0 = self.seed()?;
        let mut z = c(x0, 0.0);
        let mut phi_z = self.phi(z)?;
        let mut tau = c(0.0, 1.0);
        let mut h = (0.05 * z.norm()).min(hmax);
        let mut upper = vec![(z, phi_z)];

        let end = loop {
            if upper.len() > 200_000 {
                return Err(Error::Tracing("too many steps".into()));
            }
            let hcap = (0.05 * z.norm()).min(hmax);
            h = h.min(hcap);
            let mut pred = z + tau * h;
            if pred.im <= 0.0 && upper.len() > 1 {
                // Crossed back to the real axis.
                break None;
            }
            let mut ok = false;
            let mut phi_w = 0.0;
            for _ in 0..12 {
                phi_w = phi_z + self.phi_increment(z, pred)?;
                let f = phi_w - level;
                if f.abs() <= 1e-13 * level.abs().max(1.0) {
                    ok = true;
                    break;
                }
                let g = self.grad(pred);
                pred -= f * g.conj() / g.norm_sqr();
            }
            let new_tau = self.tangent(pred);
            let turn = (new_tau / tau).arg().abs();
            if !ok || (pred - z).norm() > 1.5 * h || turn > 0.15 || pred.im < 0.0 {
                h *= 0.5;
                if h < 1e-12 * z.norm().max(1e-300) {
                    if pred.im <= 0.0 || touches_a {
                        break None;
                    }
                    return Err(Error::Tracing(format!("step collapsed near {z}")));
                }
                continue;
            }
            z = pred;
            phi_z = phi_w;
            tau = new_tau;
            upper.push((z, phi_z));
            if touches_a && (z - self.a).norm() < hmax {
                break Some(self.a);
            }
            if turn < 0.05 {
                h = (h * 1.5).min(hcap);
            }
        };
        let x1 = match end {
            Some(x) => x,
            None if touches_a => self.a,
            None => {
                let last = upper.last().unwrap().0;
                // phi decreases on (0, a); the crossing sits right of 0.
                let lo = (last.re - 2.0 * hmax).max(1e-3 * last.re.abs().max(1e-300));
                let lo = if lo <= 0.0 { last.re * 1e-3 } else { lo };
                let hi = (last.re + 2.0 * hmax).min(self.a);
                self.bisect_real(lo, hi, level, -1.0)?
            }
        };
        upper.push((c(x1, 0.0), level));
        // Clockwise from x1: lower half (mirror of the upper arc reversed), x0, upper arc.
        let mut oval = Vec::with_capacity(2 * upper.len());
        oval.push(c(x1, 0.0));
        for &(p, _) in upper[1..upper.len() - 1].iter().rev() {
            oval.push(p.conj());
        }
        for &(p, _) in upper[..upper.len() - 1].iter() {
            oval.push(p);
        }
        oval.push(c(x1, 0.0));
        self.oval = oval;
        self.upper = upper;
        Ok(())
    }

    /// Largest distance between consecutive polyline points.
    pub fn max_step(&self) -> f64 {
        self.oval
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(0.0, f64::max)
    }

    /// `max |phi(z) + t ln l|` over the polyline.
    pub fn level_residual(&self) -> Result<f64> {
        let level = self.level();
        let mut worst: f64 = 0.0;
        for &z in &self.oval {
            worst = worst.max((self.phi(z)? - level).abs());
        }
        Ok(worst)
    }

    /// The radius of the polyline along the ray at angle `θ ∈ [0, π]`, by
    /// linear interpolation.
    fn polyline_ray(&self, theta: f64) -> (usize, f64) {
        // upper arc runs from θ = π down to θ = 0
        let args: Vec<f64> = self.upper.iter().map(|(p, _)| arg_upper(*p)).collect();
        let mut k = 0;
        while k + 1 < args.len() && args[k + 1] > theta {
            k += 1;
        }
        let k1 = (k + 1).min(args.len() - 1);
        let (p0, p1) = (self.upper[k].0, self.upper[k1].0);
        let (t0, t1) = (args[k], args[k1]);
        let s = if t0 == t1 { 0.0 } else { (t0 - theta) / (t0 - t1) };
        let rho = p0.norm() * (1.0 - s) + p1.norm() * s;
        let nearest = if s < 0.5 { k } else { k1 };
        (nearest, rho)
    }

    /// Solve `phi(ρ e^{iθ}) = level` on the ray `θ ∈ [0, π]`.
    pub fn radial_point(&self, theta: f64) -> Result<OvalPoint> {
        if self.upper.is_empty() {
            return Err(Error::domain("radial_point", "no oval for l = 0"));
        }
        let level = self.level();
        let e = Complex64::from_polar(1.0, theta);
        let (k, mut rho) = self.polyline_ray(theta);
        let (zr, phir) = self.upper[k];
        let rho0 = rho;
        let mut converged = false;
        for _ in 0..40 {
            let z = e * rho;
            let f = phir + self.phi_increment(zr, z)? - level;
            let d = (self.grad(z) * e).re;
            let step = f / d;
            let next = rho - step;
            rho = if next > 0.5 * rho && next < 1.5 * rho {
                next
            } else {
                rho * if step > 0.0 { 0.5 } else { 1.5 }
            };
            if step.abs() <= 1e-14 * rho {
                converged = true;
                break;
            }
        }
        if !converged && (rho / rho0 - 1.0).abs() > 0.5 {
            return Err(Error::Tracing(format!("ray solve failed at θ = {theta}")));
        }
        let z = e * rho;
        let fp = self.grad(z);
        let ie = c(0.0, 1.0) * e;
        let drho = -(fp * ie * rho).re / (fp * e).re;
        let dz = (drho + c(0.0, rho)) * e;
        let w = (c(0.0, 1.0) * self.r(z) * dz / (z * 2.0 * PI * self.t)).re;
        Ok(OvalPoint {
            theta,
            z,
            dz,
            weight: w,
        })
    }

    /// `∫ f dμ` over the oval, splitting the `θ`-range at `breaks` (angles in
    /// `(0, π)`; contributions from the lower half use the mirror point).
    pub fn oval_integral<T, F>(&self, mut f: F, breaks: &[f64], tol: Tolerance) -> Result<T>
    where
        T: QuadValue,
        F: FnMut(Complex64) -> T,
    {
        if self.upper.is_empty() {
            return Ok(T::zero());
        }
        let mut pts = vec![0.0];
        let mut bs: Vec<f64> = breaks.iter().cloned().filter(|&x| x > 0.0 && x < PI).collect();
        bs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.extend(bs);
        pts.push(PI);
        let mut failure = None;
        let val = integrate_pieces(
            |th| match self.radial_point(th) {
                Ok(p) => (f(p.z) + f(p.z.conj())) * p.weight,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            },
            &pts,
            tol,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(val),
        }
    }

    /// `∫_a^b f(x) ρ(x) dx` with `x = a + (b-a)(1 - cos θ)/2`.
    pub fn interval_integral<T, F>(&self, mut f: F, breaks: &[f64], tol: Tolerance) -> Result<T>
    where
        T: QuadValue,
        F: FnMut(f64) -> T,
    {
        let (a, b, t) = (self.a, self.b, self.t);
        let half = 0.5 * (b - a);
        let mut pts = vec![0.0];
        let mut bs: Vec<f64> = breaks
            .iter()
            .filter(|&&x| x > a && x < b)
            .map(|&x| (1.0 - (x - a) / half).clamp(-1.0, 1.0).acos())
            .collect();
        bs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.extend(bs);
        pts.push(PI);
        integrate_pieces(
            |th| {
                let x = a + half * (1.0 - th.cos());
                let s = half * th.sin();
                f(x) * (s * s / (2.0 * PI * t * x))
            },
            &pts,
            tol,
        )
    }

    pub fn interval_charge(&self) -> Result<f64> {
        self.interval_integral(|_| 1.0, &[], DENSITY_TOL)
    }

    /// Oval charge; the atom's mass when `l = 0`.
    pub fn oval_charge(&self) -> Result<f64> {
        if self.has_atom() {
            return Ok(1.0 / self.t);
        }
        self.oval_integral(|_| 1.0, &[], DENSITY_TOL)
    }

    /// Oval charge from the polyline alone (trapezoid rule on arclength).
    pub fn polyline_charge(&self) -> f64 {
        let w: Vec<f64> = self
            .oval
            .iter()
            .map(|&z| {
                if z.im == 0.0 && (z.re - self.a).abs() < 1e-12 {
                    0.0
                } else {
                    self.r(z).norm() / (2.0 * PI * self.t * z.norm())
                }
            })
            .collect();
        self.oval
            .windows(2)
            .zip(w.windows(2))
            .map(|(p, q)| 0.5 * (q[0] + q[1]) * (p[1] - p[0]).norm())
            .sum()
    }

    /// `ω(z) = ∫ ρ(z')/(z - z') |dz'|` over the whole support.
    pub fn resolvent(&self, z: Complex64) -> Result<Complex64> {
        let (a, b) = (self.a, self.b);
        let near = z.re > a && z.re < b && z.im.abs() < 0.1 * (b - a);
        let interval = if near {
            // Subtract the density at Re z so the kernel stays bounded.
            let x0 = z.re;
            let rho0 = density_interval(x0, self.t)?;
            let t = self.t;
            let half = 0.5 * (b - a);
            let th0 = (1.0 - (x0 - a) / half).clamp(-1.0, 1.0).acos();
            let smooth: Complex64 = integrate_pieces(
                |th| {
                    let x = a + half * (1.0 - th.cos());
                    let s = half * th.sin();
                    let rho = s / (2.0 * PI * t * x);
                    (rho - rho0) / (z - x) * (half * th.sin())
                },
                &[0.0, th0, PI],
                DENSITY_TOL,
            )?;
            smooth + rho0 * ((z - a).ln() - (z - b).ln())
        } else {
            self.interval_integral(|x| 1.0 / (z - x), &[], DENSITY_TOL)?
        };
        let rest = if self.has_atom() {
            1.0 / (self.t * z)
        } else {
            self.oval_integral(|w| 1.0 / (z - w), &[], DENSITY_TOL)?
        };
        Ok(interval + rest)
    }

    /// `y(z) = (1/t)(1 + 1/z) - 2ω(z)`.
    pub fn y(&self, z: Complex64) -> Result<Complex64> {
        Ok((1.0 + 1.0 / z) / self.t - 2.0 * self.resolvent(z)?)
    }

    /// `R(z) = (z² - (4t-2)z + 1) / (t² z²)`.
    pub fn r_squared(&self, z: Complex64) -> Complex64 {
        let t = self.t;
        (z * z - (4.0 * t - 2.0) * z + 1.0) / (t * t * z * z)
    }

    /// `|y(z)² - R(z)|` with `ω` from quadrature.
    pub fn sd_identity_residual(&self, z: Complex64) -> Result<f64> {
        if z.norm() == 0.0 {
            return Err(Error::domain("sd_identity_residual", "z = 0"));
        }
        let y = self.y(z)?;
        Ok((y * y - self.r_squared(z)).norm())
    }

    /// `|y(x+iε) + y(x-iε)|` at an interior point of the interval.
    pub fn jump_mismatch(&self, x: f64, eps: f64) -> Result<f64> {
        let up = self.y(c(x, eps))?;
        let down = self.y(c(x, -eps))?;
        Ok((up + down).norm())
    }

    /// Density samples: `m` interior interval points, every polyline vertex,
    /// and the atom when present.
    pub fn samples(&self, m: usize) -> Result<Vec<DensitySample>> {
        let mut out = Vec::new();
        for k in 0..=m {
            let th = PI * k as f64 / m.max(1) as f64;
            let x = self.a + 0.5 * (self.b - self.a) * (1.0 - th.cos());
            let x = x.clamp(self.a, self.b);
            out.push(DensitySample {
                point: c(x, 0.0),
                weight: density_interval(x, self.t)?,
                component: Component::Interval,
            });
        }
        if self.has_atom() {
            out.push(DensitySample {
                point: c(0.0, 0.0),
                weight: 1.0 / self.t,
                component: Component::OriginAtom,
            });
        }
        let closed = self.oval.len().saturating_sub(1);
        for &z in &self.oval[..closed] {
            let weight = if (z - self.a).norm() < 1e-12 {
                0.0
            } else {
                density_oval(z, self.tangent(z), self.t)?
            };
            out.push(DensitySample {
                point: z,
                weight,
                component: Component::Oval,
            });
        }
        Ok(out)
    }

    /// Distance from `z` to the support (oval polyline ∪ interval ∪ atom).
    pub fn distance_to_support(&self, z: Complex64) -> f64 {
        let xi = z.re.clamp(self.a, self.b);
        let mut d = (z - xi).norm();
        if self.has_atom() {
            d = d.min(z.norm());
        }
        for w in self.oval.windows(2) {
            d = d.min(segment_distance(z, w[0], w[1]));
        }
        d
    }

    /// CSV rows `component,re,im,weight`.
    pub fn to_csv(&self, interval_samples: usize) -> Result<String> {
        let mut s = String::from("component,re,im,weight\n");
        for p in self.samples(interval_samples)? {
            s.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                p.component.as_str(),
                p.point.re,
                p.point.im,
                p.weight
            ));
        }
        Ok(s)
    }
}

fn arg_upper(z: Complex64) -> f64 {
    if z.im == 0.0 {
        if z.re < 0.0 {
            PI
        } else {
            0.0
        }
    } else {
        z.arg()
    }
}

fn segment_distance(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let s = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (p + d * s)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_at_sqrt3() {
        let (a, b) = endpoints(3f64.sqrt()).unwrap();
        assert!((a - 0.212_036_6).abs() < 1e-6, "{a}");
        assert!((b - 4.716_166_6).abs() < 1e-6, "{b}");
        assert!(endpoints(1.0).is_err());
    }

    #[test]
    fn branch_normalization() {
        let t = 3f64.sqrt();
        assert!((r_of_z(c(0.0, 0.0), t).unwrap() + 1.0).norm() < 1e-15);
        let z = c(1e6, 3e5);
        assert!((r_of_z(z, t).unwrap() / z - 1.0).norm() < 1e-5);
        assert!(r_of_z(c(1.0, 0.0), t).is_err());
    }

    #[test]
    fn phi_vanishes_at_a_and_is_real_symmetric() {
        let t = 3f64.sqrt();
        let (a, _) = endpoints(t).unwrap();
        assert_eq!(phi(c(a, 0.0), t).unwrap(), 0.0);
        let z = c(-0.3, 0.7);
        let d = phi(z, t).unwrap() - phi(z.conj(), t).unwrap();
        assert!(d.abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let t = 2.0;
        let z = c(-0.4, 0.3);
        let (a, b) = endpoints(t).unwrap();
        let g = dphi(z, a, b).conj();
        let h = 1e-5;
        let dx = (phi(z + h, t).unwrap() - phi(z - h, t).unwrap()) / (2.0 * h);
        let dy = (phi(z + c(0.0, h), t).unwrap() - phi(z - c(0.0, h), t).unwrap()) / (2.0 * h);
        assert!((g - c(dx, dy)).norm() < 1e-8);
    }
}
