use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::embed::ScheduleKind;
use crate::error::{Error, Result};
use crate::geom::{format_rational, parse_rational};
use crate::goodset::GoodCaps;
use crate::holes::Caps;

/// Environment variables that replace the built-in cap defaults. Values
/// given in a config file or on the command line take precedence.
pub const ENV_MAX_SUBSETS: &str = "HOLEFREE_MAX_SUBSETS";
pub const ENV_MAX_PREDICATE_CALLS: &str = "HOLEFREE_MAX_PREDICATE_CALLS";
pub const ENV_MAX_DM: &str = "HOLEFREE_MAX_DM";
pub const ENV_MAX_CLASS_SUBSETS: &str = "HOLEFREE_MAX_CLASS_SUBSETS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseChoice {
    /// `2^(2m)`.
    Auto,
    Fixed(BigInt),
}

impl std::str::FromStr for BaseChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "auto" {
            return Ok(BaseChoice::Auto);
        }
        let b: BigInt = s.trim().parse().map_err(|_| {
            Error::parse(
                "base",
                format!("expected \"auto\" or an integer, got {s:?}"),
            )
        })?;
        if b < BigInt::from(2) {
            return Err(Error::parse(
                "base",
                format!("B must be at least 2, got {b}"),
            ));
        }
        Ok(BaseChoice::Fixed(b))
    }
}

impl std::fmt::Display for BaseChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaseChoice::Auto => f.write_str("auto"),
            BaseChoice::Fixed(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub d: usize,
    pub n: u32,
    pub t_count: u64,
    pub eps: BigRational,
    pub base: BaseChoice,
    pub schedule: ScheduleKind,
    pub seed: u64,
    pub caps: Caps,
    pub good_caps: GoodCaps,
    /// Squarings of `B` tried after the first certification attempt.
    pub max_escalations: usize,
    pub perturb_attempts: usize,
    pub out: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(d: usize, n: u32) -> Self {
        PipelineConfig {
            d,
            n,
            t_count: 1,
            eps: BigRational::zero(),
            base: BaseChoice::Auto,
            schedule: ScheduleKind::default(),
            seed: 0,
            caps: Caps::default(),
            good_caps: GoodCaps::default(),
            max_escalations: 4,
            perturb_attempts: 32,
            out: None,
        }
    }

    /// Defaults with cap overrides from the environment.
    pub fn from_env(d: usize, n: u32) -> Result<Self> {
        let mut c = Self::new(d, n);
        let get = |key: &str| -> Result<Option<u64>> {
            match std::env::var(key) {
                Ok(v) => v
                    .trim()
                    .parse::<u64>()
                    .map(Some)
                    .map_err(|e| Error::parse(key, format!("{v:?}: {e}"))),
                Err(_) => Ok(None),
            }
        };
        if let Some(v) = get(ENV_MAX_SUBSETS)? {
            c.caps.max_subsets = v;
        }
        if let Some(v) = get(ENV_MAX_PREDICATE_CALLS)? {
            c.caps.max_predicate_calls = v;
        }
        if let Some(v) = get(ENV_MAX_DM)? {
            c.good_caps.max_dm = v as usize;
        }
        if let Some(v) = get(ENV_MAX_CLASS_SUBSETS)? {
            c.good_caps.max_subsets_per_class = v;
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("d", self.d as u64),
            ("T", self.t_count),
            ("max_subsets", self.caps.max_subsets),
            ("max_predicate_calls", self.caps.max_predicate_calls),
            ("max_dm", self.good_caps.max_dm as u64),
            ("max_class_subsets", self.good_caps.max_subsets_per_class),
            ("perturb_attempts", self.perturb_attempts as u64),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::parse(*name, "must be positive"));
        }
        if self.d < 2 {
            return Err(Error::parse(
                "d",
                format!("must be at least 2, got {}", self.d),
            ));
        }
        if self.eps < BigRational::zero() || self.eps >= BigRational::from_integer(1.into()) {
            return Err(Error::parse("eps", "must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Applies a key-value (TOML) config on top of `self`.
    pub fn apply_text(mut self, text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::parse("config", e.to_string()))?;
        macro_rules! set {
            ($field:ident => $target:expr) => {
                if let Some(v) = raw.$field {
                    $target = v;
                }
            };
        }
        set!(d => self.d);
        set!(n => self.n);
        set!(t_count => self.t_count);
        set!(schedule => self.schedule);
        set!(seed => self.seed);
        set!(max_subsets => self.caps.max_subsets);
        set!(max_predicate_calls => self.caps.max_predicate_calls);
        set!(max_dm => self.good_caps.max_dm);
        set!(max_class_subsets => self.good_caps.max_subsets_per_class);
        set!(max_escalations => self.max_escalations);
        set!(perturb_attempts => self.perturb_attempts);
        if let Some(e) = raw.eps {
            self.eps = parse_rational(&e).map_err(|err| Error::parse("eps", err.to_string()))?;
        }
        if let Some(b) = raw.base {
            self.base = b.as_string().parse()?;
        }
        if let Some(o) = raw.out {
            self.out = Some(o);
        }
        Ok(self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let raw: RawConfig =
            toml::from_str(&text).map_err(|e| Error::parse("config", e.to_string()))?;
        let (Some(d), Some(n)) = (raw.d, raw.n) else {
            return Err(Error::parse("config", "`d` and `n` are required"));
        };
        Self::from_env(d, n)?.apply_text(&text)
    }

    /// Key-value text that [`PipelineConfig::apply_text`] reads back.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("d = {}\n", self.d));
        s.push_str(&format!("n = {}\n", self.n));
        s.push_str(&format!("T = {}\n", self.t_count));
        s.push_str(&format!("eps = \"{}\"\n", format_rational(&self.eps)));
        s.push_str(&format!("base = \"{}\"\n", self.base));
        let kind = match self.schedule {
            ScheduleKind::Geometric => "geometric",
            ScheduleKind::Triangular => "triangular",
        };
        s.push_str(&format!("schedule = \"{kind}\"\n"));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("max_subsets = {}\n", self.caps.max_subsets));
        s.push_str(&format!(
            "max_predicate_calls = {}\n",
            self.caps.max_predicate_calls
        ));
        s.push_str(&format!("max_dm = {}\n", self.good_caps.max_dm));
        s.push_str(&format!(
            "max_class_subsets = {}\n",
            self.good_caps.max_subsets_per_class
        ));
        s.push_str(&format!("max_escalations = {}\n", self.max_escalations));
        s.push_str(&format!("perturb_attempts = {}\n", self.perturb_attempts));
        s
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseValue {
    Int(i64),
    Text(String),
}

impl BaseValue {
    fn as_string(&self) -> String {
        match self {
            BaseValue::Int(i) => i.to_string(),
            BaseValue::Text(s) => s.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    d: Option<usize>,
    n: Option<u32>,
    #[serde(rename = "T")]
    t_count: Option<u64>,
    eps: Option<String>,
    base: Option<BaseValue>,
    schedule: Option<ScheduleKind>,
    seed: Option<u64>,
    max_subsets: Option<u64>,
    max_predicate_calls: Option<u64>,
    max_dm: Option<usize>,
    max_class_subsets: Option<u64>,
    max_escalations: Option<usize>,
    perturb_attempts: Option<usize>,
    out: Option<PathBuf>,
}

/// Config echo stored in `report.json`.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub d: usize,
    pub n: u32,
    #[serde(rename = "T")]
    pub t_count: u64,
    pub eps: String,
    pub base: String,
    pub schedule: ScheduleKind,
    pub seed: u64,
    pub caps: Caps,
    pub good_caps: GoodCaps,
    pub max_escalations: usize,
    pub perturb_attempts: usize,
}

impl From<&PipelineConfig> for ConfigEcho {
    fn from(c: &PipelineConfig) -> Self {
        ConfigEcho {
            d: c.d,
            n: c.n,
            t_count: c.t_count,
            eps: format_rational(&c.eps),
            base: c.base.to_string(),
            schedule: c.schedule,
            seed: c.seed,
            caps: c.caps,
            good_caps: c.good_caps,
            max_escalations: c.max_escalations,
            perturb_attempts: c.perturb_attempts,
        }
    }
}
