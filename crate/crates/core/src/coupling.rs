//! Coupling-constant sequences `n ↦ g_n` with `n g_n → t`, and the
//! fine-structure parameter `l = lim |sin(π/g_n)|^{1/n}`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::dd::DoubleWord;
use crate::error::{Error, Result};
use crate::specfun::NearInteger;

/// The 't Hooft coupling, either as an exact ratio `p/q` or as a float.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Thooft {
    Ratio { p: u64, q: u64 },
    Real(f64),
}

impl Thooft {
    /// Exact ratio in lowest terms.
    pub fn ratio(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSequence(format!("t = {p}/{q} must be positive")));
        }
        let d = p.gcd(&q);
        Ok(Thooft::Ratio { p: p / d, q: q / d })
    }

    pub fn real(t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidSequence(format!("t = {t} must be positive")));
        }
        Ok(Thooft::Real(t))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Thooft::Ratio { p, q } => p as f64 / q as f64,
            Thooft::Real(t) => t,
        }
    }

    pub fn as_ratio(&self) -> Option<(u64, u64)> {
        match *self {
            Thooft::Ratio { p, q } => Some((p, q)),
            Thooft::Real(_) => None,
        }
    }

    /// `n / t` split as `(⌊n/t⌋, {n/t})`; exact in the ratio case.
    fn n_over_t(&self, n: u64) -> (i64, f64) {
        match *self {
            Thooft::Ratio { p, q } => {
                let num = n as u128 * q as u128;
                let (k, rem) = num.div_rem(&(p as u128));
                (k as i64, rem as f64 / p as f64)
            }
            Thooft::Real(t) => {
                let x = n as f64 / t;
                let k = x.floor();
                (k as i64, x - k)
            }
        }
    }
}

/// One of the three coupling families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingSequence {
    /// `g_n = t/n`
    Thooft { t: Thooft },
    /// `g_n = 1/(n/t + α)`
    Shifted { t: Thooft, alpha: f64 },
    /// `g_n = 1/(⌊n/t⌋ + e^{-nr}/2)`, `r ∈ [0, ∞]`
    IntegerPart {
        t: Thooft,
        #[serde(with = "extended_real")]
        r: f64,
    },
}

/// Value of the fine-structure limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FineStructure {
    pub l: Option<f64>,
    pub exists: bool,
}

impl FineStructure {
    fn defined(l: f64) -> Self {
        FineStructure {
            l: Some(l),
            exists: true,
        }
    }

    fn undefined() -> Self {
        FineStructure {
            l: None,
            exists: false,
        }
    }
}

/// Finite-n estimate `|sin(π/g_n)|^{1/n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LEstimate {
    pub n: u64,
    pub value: f64,
    pub log_value: f64,
    /// `1/g_n` is an integer, so the estimate is exactly zero.
    pub degenerate: bool,
}

/// A single coupling value, held through its inverse `1/g` split into
/// integer and offset parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    inverse: NearInteger,
}

impl Coupling {
    pub fn from_g(g: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::domain("coupling", format!("g = {g} must be positive")));
        }
        Ok(Coupling {
            inverse: NearInteger::from_f64(1.0 / g),
        })
    }

    pub fn from_inverse(inverse: NearInteger) -> Result<Self> {
        if !(inverse.value() > 0.0) {
            return Err(Error::domain("coupling", "1/g must be positive"));
        }
        Ok(Coupling { inverse })
    }

    pub fn g(&self) -> f64 {
        1.0 / self.inverse.value()
    }

    pub fn g_dd(&self) -> DoubleWord {
        DoubleWord::ONE / self.inverse.value_dd()
    }

    /// `1/g`.
    pub fn inverse(&self) -> &NearInteger {
        &self.inverse
    }

    /// `ln|sin(π/g)|`.
    pub fn ln_abs_sin(&self) -> f64 {
        self.inverse.ln_abs_sin_pi()
    }
}

impl CouplingSequence {
    pub fn thooft(t: Thooft) -> Result<Self> {
        Ok(CouplingSequence::Thooft { t }).and_then(Self::validated)
    }

    pub fn shifted(t: Thooft, alpha: f64) -> Result<Self> {
        Self::validated(CouplingSequence::Shifted { t, alpha })
    }

    pub fn integer_part(t: Thooft, r: f64) -> Result<Self> {
        Self::validated(CouplingSequence::IntegerPart { t, r })
    }

    /// Checks parameter ranges and reduces ratios to lowest terms.
    pub fn validated(self) -> Result<Self> {
        let fix_t = |t: Thooft| match t {
            Thooft::Ratio { p, q } => Thooft::ratio(p, q),
            Thooft::Real(x) => Thooft::real(x),
        };
        Ok(match self {
            CouplingSequence::Thooft { t } => CouplingSequence::Thooft { t: fix_t(t)? },
            CouplingSequence::Shifted { t, alpha } => {
                if !(alpha >= 0.0) || !alpha.is_finite() {
                    return Err(Error::InvalidSequence(format!("alpha = {alpha} must be >= 0")));
                }
                CouplingSequence::Shifted { t: fix_t(t)?, alpha }
            }
            CouplingSequence::IntegerPart { t, r } => {
                if !(r >= 0.0) {
                    return Err(Error::InvalidSequence(format!("r = {r} must lie in [0, inf]")));
                }
                CouplingSequence::IntegerPart { t: fix_t(t)?, r }
            }
        })
    }

    pub fn t(&self) -> Thooft {
        match *self {
            CouplingSequence::Thooft { t }
            | CouplingSequence::Shifted { t, .. }
            | CouplingSequence::IntegerPart { t, .. } => t,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CouplingSequence::Thooft { .. } => "thooft",
            CouplingSequence::Shifted { .. } => "shifted",
            CouplingSequence::IntegerPart { .. } => "integer_part",
        }
    }

    /// `1/g_n` as integer plus offset.
    pub fn inverse(&self, n: u64) -> NearInteger {
        match *self {
            CouplingSequence::Thooft { t } => {
                let (k, frac) = t.n_over_t(n);
                NearInteger::from_parts(k, frac)
            }
            CouplingSequence::Shifted { t, alpha } => {
                let (k, frac) = t.n_over_t(n);
                NearInteger::from_parts(k, frac + alpha)
            }
            CouplingSequence::IntegerPart { t, r } => {
                let (k, _) = t.n_over_t(n);
                if r == f64::INFINITY {
                    return NearInteger::integer(k);
                }
                let ln_c = -(n as f64) * r - std::f64::consts::LN_2;
                if ln_c > -20.0 {
                    NearInteger::from_parts(k, ln_c.exp())
                } else {
                    NearInteger::from_log_offset(k, 1.0, ln_c)
                }
            }
        }
    }

    pub fn coupling(&self, n: u64) -> Coupling {
        Coupling {
            inverse: self.inverse(n),
        }
    }

    /// `g_n`.
    pub fn g_of_n(&self, n: u64) -> f64 {
        assert!(n >= 1, "sequences start at n = 1");
        1.0 / self.inverse(n).value()
    }

    /// `|sin(π/g_n)|^{1/n}`, computed from `ln|sin(π {1/g_n})| / n`.
    pub fn finite_l_estimate(&self, n: u64) -> LEstimate {
        let inv = self.inverse(n);
        let ln_sin = inv.ln_abs_sin_pi();
        let log_value = ln_sin / n as f64;
        LEstimate {
            n,
            value: log_value.exp(),
            log_value,
            degenerate: inv.is_integer(),
        }
    }

    /// The limit `l`, decided analytically per family.
    pub fn limit_l(&self) -> FineStructure {
        match *self {
            CouplingSequence::IntegerPart { r, .. } => FineStructure::defined((-r).exp()),
            CouplingSequence::Shifted { t, alpha } => match t {
                Thooft::Ratio { p, .. } => {
                    let x = alpha * p as f64;
                    if (x - x.round()).abs() < 1e-12 {
                        FineStructure::undefined()
                    } else {
                        FineStructure::defined(1.0)
                    }
                }
                // The cycling argument needs rational t.
                Thooft::Real(_) => FineStructure::undefined(),
            },
            CouplingSequence::Thooft { t } => match t {
                // 1/g_n = nq is always an integer.
                Thooft::Ratio { p: 1, .. } => FineStructure::defined(0.0),
                _ => FineStructure::undefined(),
            },
        }
    }

    /// `j_n = n q mod p` for sequences built on an exact ratio `t = p/q`.
    pub fn residue_class(&self, n: u64) -> Option<u64> {
        self.t().as_ratio().map(|(p, q)| residue_class(n, p, q))
    }
}

pub fn residue_class(n: u64, p: u64, q: u64) -> u64 {
    ((n as u128 * q as u128) % p as u128) as u64
}

/// Serialize non-finite floats as the strings "inf", "-inf", "nan".
pub(crate) mod extended_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| de::Error::custom(format!("not a number: {s}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt3() -> Thooft {
        Thooft::real(3f64.sqrt()).unwrap()
    }

    #[test]
    fn g_of_n_examples() {
        let th = CouplingSequence::thooft(Thooft::real(2.0).unwrap()).unwrap();
        assert_eq!(th.g_of_n(4), 0.5);

        let ip = CouplingSequence::integer_part(sqrt3(), 1.0 / 7.0).unwrap();
        let expected = 1.0 / (34.0 + (-60.0f64 / 7.0).exp() / 2.0);
        assert!((ip.g_of_n(60) - expected).abs() < 1e-16);

        let sh = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap();
        assert!((sh.g_of_n(10) - 1.0 / 4.3).abs() < 1e-15);
    }

    #[test]
    fn ratio_reduced_to_lowest_terms() {
        assert_eq!(Thooft::ratio(10, 4).unwrap(), Thooft::Ratio { p: 5, q: 2 });
        assert!(Thooft::ratio(0, 1).is_err());
        assert!(Thooft::real(-1.0).is_err());
        assert!(CouplingSequence::shifted(Thooft::Real(2.0), -0.1).is_err());
        assert!(CouplingSequence::integer_part(Thooft::Real(2.0), -1.0).is_err());
    }

    #[test]
    fn l_estimate_converges_for_integer_part() {
        let seq = CouplingSequence::integer_part(sqrt3(), 1.0 / 3.0).unwrap();
        let target = (-1.0f64 / 3.0).exp();
        let errs: Vec<f64> = [50, 100, 200]
            .iter()
            .map(|&n| (seq.finite_l_estimate(n).value - target).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 0.02);
        // closed form e^{-1/3} (π/2)^{1/n} up to O(c_n²)
        let e = seq.finite_l_estimate(200);
        let approx = target * (std::f64::consts::FRAC_PI_2).powf(1.0 / 200.0);
        assert!((e.value - approx).abs() < 1e-12);
    }

    #[test]
    fn l_estimate_degenerate_cases() {
        let seq = CouplingSequence::integer_part(sqrt3(), f64::INFINITY).unwrap();
        for n in [1, 10, 100] {
            let e = seq.finite_l_estimate(n);
            assert!(e.degenerate);
            assert_eq!(e.value, 0.0);
        }
        let th = CouplingSequence::thooft(Thooft::ratio(2, 1).unwrap()).unwrap();
        let e = th.finite_l_estimate(8);
        assert!(e.degenerate && e.value == 0.0);
        assert!(!th.finite_l_estimate(7).degenerate);
    }

    #[test]
    fn tiny_offsets_survive_underflow() {
        let seq = CouplingSequence::integer_part(sqrt3(), 1.0).unwrap();
        let e = seq.finite_l_estimate(2000);
        assert!(!e.degenerate);
        assert!((e.log_value + 1.0).abs() < 1e-3);
    }

    #[test]
    fn analytic_limits() {
        let ip = CouplingSequence::integer_part(sqrt3(), 1.0 / 7.0).unwrap();
        assert_eq!(ip.limit_l(), FineStructure::defined((-1.0f64 / 7.0).exp()));
        let inf = CouplingSequence::integer_part(sqrt3(), f64::INFINITY).unwrap();
        assert_eq!(inf.limit_l().l, Some(0.0));
        let th = CouplingSequence::thooft(Thooft::ratio(5, 2).unwrap()).unwrap();
        assert!(!th.limit_l().exists);
        let sh = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap();
        assert_eq!(sh.limit_l(), FineStructure::defined(1.0));
        let lattice = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.4).unwrap();
        assert!(!lattice.limit_l().exists);
        let irrational = CouplingSequence::shifted(sqrt3(), 0.3).unwrap();
        assert!(!irrational.limit_l().exists);
    }

    #[test]
    fn shifted_product_tends_to_t() {
        let alpha = 0.3;
        let t = 2.5;
        let seq = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), alpha).unwrap();
        for n in (1..=10_000u64).step_by(37) {
            let ng = n as f64 * seq.g_of_n(n);
            assert!((ng - t).abs() < t * t * (alpha + 1.0) / n as f64);
        }
    }

    #[test]
    fn integer_part_log_estimate_error_decreases() {
        let r = 1.0 / 7.0;
        let seq = CouplingSequence::integer_part(sqrt3(), r).unwrap();
        let mut prev = f64::INFINITY;
        for k in 4..14 {
            let n = 1u64 << k;
            let err = (seq.finite_l_estimate(n).log_value + r).abs();
            assert!(err < prev);
            assert!(err <= ((n as f64).ln() / n as f64).max(1e-15) * 2.0);
            prev = err;
        }
    }

    #[test]
    fn shifted_fractional_parts_cycle() {
        let (p, q) = (5u64, 2u64);
        let alpha = 0.3;
        let seq = CouplingSequence::shifted(Thooft::ratio(p, q).unwrap(), alpha).unwrap();
        let allowed: Vec<f64> = (0..p).map(|j| (alpha + j as f64 / p as f64).fract()).collect();
        for n in 1..200u64 {
            let f = seq.inverse(n).fract();
            assert_eq!(f, seq.inverse(n + p).fract());
            assert!(allowed.iter().any(|a| (a - f).abs() < 1e-12), "n={n} frac={f}");
            let j = seq.residue_class(n).unwrap();
            assert!((f - allowed[j as usize]).abs() < 1e-12);
        }
    }

    #[test]
    fn serde_round_trip_with_infinity() {
        let seq = CouplingSequence::integer_part(Thooft::ratio(7, 4).unwrap(), f64::INFINITY).unwrap();
        let s = serde_json::to_string(&seq).unwrap();
        assert!(s.contains("\"inf\""), "{s}");
        let back: CouplingSequence = serde_json::from_str(&s).unwrap();
        assert_eq!(back, seq);
        let parsed: CouplingSequence =
            serde_json::from_str(r#"{"kind":"shifted","t":2.5,"alpha":0.3}"#).unwrap();
        assert_eq!(parsed.t(), Thooft::Real(2.5));
    }
}
