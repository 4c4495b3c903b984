//! Run parameters from flags, an optional flat JSON config file, and defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer};

use penner::coupling::{CouplingSequence, Thooft};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Thooft,
    Shifted,
    IntegerPart,
}

/// Every tunable; all optional so that flags can be layered over the config file.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Flat JSON object with the same keys as the long flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Sequence family (inferred from --r / --alpha when absent)
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// 't Hooft coupling as a float
    #[arg(long)]
    pub t: Option<f64>,
    /// Numerator of an exact t = p/q
    #[arg(long)]
    pub p: Option<u64>,
    /// Denominator of an exact t = p/q
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Decay rate of the integer_part offset; "inf" is allowed
    #[arg(long)]
    #[serde(default, deserialize_with = "extended")]
    pub r: Option<f64>,
    /// Fine-structure parameter, overriding the sequence limit
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    #[serde(alias = "n-max")]
    pub n_max: Option<u64>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tolerance override for every check of `verify`
    #[arg(long)]
    pub tol: Option<f64>,
    /// Expansion order
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(alias = "j-max")]
    pub j_max: Option<usize>,
    #[arg(long)]
    #[serde(alias = "s-max")]
    pub s_max: Option<usize>,
    /// Double-scaling variable (t-1)n
    #[arg(long)]
    pub mu: Option<f64>,
    /// alpha/mu
    #[arg(long)]
    pub tau: Option<f64>,
    /// Sample count per component
    #[arg(long)]
    pub samples: Option<usize>,
}

fn extended<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }
    match Option::<Repr>::deserialize(d)? {
        None => Ok(None),
        Some(Repr::Num(x)) => Ok(Some(x)),
        Some(Repr::Str(s)) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("r: not a number: {s}"))),
    }
}

macro_rules! layer {
    ($top:expr, $low:expr, $($f:ident),*) => {
        Params { config: $top.config.clone(), $($f: $top.$f.clone().or($low.$f.clone()),)* }
    };
}

impl Params {
    /// Flags over the config file named by `--config`.
    pub fn resolve(self) -> Result<Params> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        Ok(layer!(self, file, kind, t, p, q, alpha, r, l, n, n_max, out, format, tol, k, j_max, s_max, mu, tau, samples))
    }

    pub fn thooft(&self) -> Result<Thooft> {
        match (self.p, self.q) {
            (Some(p), Some(q)) => Ok(Thooft::ratio(p, q)?),
            (None, None) => Ok(Thooft::real(self.t.unwrap_or(3f64.sqrt()))?),
            _ => bail!("--p and --q must be given together"),
        }
    }

    pub fn t_value(&self) -> Result<f64> {
        Ok(self.thooft()?.value())
    }

    pub fn sequence(&self) -> Result<CouplingSequence> {
        let t = self.thooft()?;
        let kind = self.kind.unwrap_or(match (self.r, self.alpha) {
            (Some(_), _) => Kind::IntegerPart,
            (None, Some(_)) => Kind::Shifted,
            (None, None) => Kind::IntegerPart,
        });
        Ok(match kind {
            Kind::Thooft => CouplingSequence::thooft(t)?,
            Kind::Shifted => CouplingSequence::shifted(t, self.alpha.unwrap_or(0.3))?,
            Kind::IntegerPart => CouplingSequence::integer_part(t, self.r.unwrap_or(1.0 / 7.0))?,
        })
    }

    /// `--l`, else the analytic limit of the sequence.
    pub fn l_value(&self) -> Result<f64> {
        if let Some(l) = self.l {
            return Ok(l);
        }
        let seq = self.sequence()?;
        match seq.limit_l().l {
            Some(l) => Ok(l),
            None => bail!("l has no limit for this {} sequence; pass --l", seq.kind()),
        }
    }

    pub fn n_value(&self) -> u64 {
        self.n.unwrap_or(60)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn read_config(path: &Path) -> Result<Params> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
