use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::geo::Region;
use crate::labels::DegreeKind;
use crate::synth::{CityConfig, SynthConfig};

/// Where the hybrid network comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NetworkSource {
    /// Three-BA-graph hybrid built in memory.
    Synthetic(SynthConfig),
    /// LBSN-style city with geolocated venues, built in memory.
    City(CityConfig),
    /// Edge lists for the target and auxiliary graphs and `user venue`
    /// affiliation pairs, all keyed by external ids.
    Files {
        target: PathBuf,
        auxiliary: PathBuf,
        affiliation: PathBuf,
        #[serde(default)]
        directed: bool,
    },
    /// Friendship edge list plus a tab-separated check-in dump.
    Lbsn {
        social: PathBuf,
        checkins: PathBuf,
        #[serde(default)]
        bbox: Option<Region>,
        #[serde(default)]
        directed: bool,
    },
}

impl NetworkSource {
    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match self {
            NetworkSource::Files {
                target,
                auxiliary,
                affiliation,
                ..
            } => {
                fix(target);
                fix(auxiliary);
                fix(affiliation);
            }
            NetworkSource::Lbsn {
                social, checkins, ..
            } => {
                fix(social);
                fix(checkins);
            }
            _ => {}
        }
    }
}

/// Sampling budget: target samples for walks, auxiliary draws for vertex
/// sampling. In TOML either `{ absolute = 2000 }`, `{ fraction = 0.02 }`,
/// a bare integer or a string such as `"2%"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", try_from = "BudgetRepr")]
pub enum Budget {
    Absolute(usize),
    /// Fraction of the target node count.
    Fraction(f64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BudgetRepr {
    Int(usize),
    Text(String),
    Table(BudgetTable),
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum BudgetTable {
    Absolute(usize),
    Fraction(f64),
}

impl TryFrom<BudgetRepr> for Budget {
    type Error = Error;

    fn try_from(r: BudgetRepr) -> Result<Self> {
        match r {
            BudgetRepr::Int(b) => Ok(Budget::Absolute(b)),
            BudgetRepr::Text(s) => s.parse(),
            BudgetRepr::Table(BudgetTable::Absolute(b)) => Ok(Budget::Absolute(b)),
            BudgetRepr::Table(BudgetTable::Fraction(f)) => Ok(Budget::Fraction(f)),
        }
    }
}

impl Budget {
    pub fn resolve(&self, n: usize) -> Result<usize> {
        let b = match *self {
            Budget::Absolute(b) => b,
            Budget::Fraction(f) => {
                if !(f > 0.0 && f.is_finite()) {
                    return Err(Error::Config(format!(
                        "budget fraction {f} must be positive"
                    )));
                }
                (f * n as f64).round() as usize
            }
        };
        if b == 0 {
            return Err(Error::Config(format!(
                "{self} resolves to an empty budget for n={n}"
            )));
        }
        Ok(b)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Absolute(b) => write!(f, "{b}"),
            Budget::Fraction(x) => write!(f, "{}%", x * 100.0),
        }
    }
}

/// `2000` is absolute, `2%` and `0.02` are fractions of `n`.
impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse budget {s:?}"));
        if let Some(pct) = s.strip_suffix('%') {
            let x: f64 = pct.trim().parse().map_err(|_| bad())?;
            return Ok(Budget::Fraction(x / 100.0));
        }
        if let Ok(b) = s.parse::<usize>() {
            return Ok(Budget::Absolute(b));
        }
        match s.parse::<f64>() {
            Ok(x) if x > 0.0 && x < 1.0 => Ok(Budget::Fraction(x)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RrziSettings {
    /// Result cap of the simulated venue API.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Zoom root; defaults to the network's bounding box.
    #[serde(default)]
    pub root: Option<Region>,
}

fn default_k() -> usize {
    50
}

impl Default for RrziSettings {
    fn default() -> Self {
        RrziSettings {
            k: default_k(),
            root: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

fn default_alpha() -> Vec<f64> {
    vec![1.0]
}

/// One experiment: a network, the methods to compare and the sweep over
/// jump rates and budgets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub network: NetworkSource,
    pub methods: Vec<Method>,
    /// Jump mass on the target side; a list sweeps it.
    #[serde(default = "default_alpha", deserialize_with = "one_or_many")]
    pub alpha: Vec<f64>,
    /// Jump mass on the auxiliary side; defaults to the current `alpha`.
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(deserialize_with = "one_or_many")]
    pub budget: Vec<Budget>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    pub seed: u64,
    #[serde(default = "default_labels")]
    pub labels: DegreeKind,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub rrzi: RrziSettings,
    /// Burn-in rounds of the MH and auxiliary chains before the target walk.
    #[serde(default)]
    pub mh_burn_in: usize,
    /// Use the known-`n` form for vertex-sampling estimates instead of the
    /// ratio form.
    #[serde(default)]
    pub vsa_known_n: bool,
}

fn default_runs() -> usize {
    200
}

fn default_labels() -> DegreeKind {
    DegreeKind::Degree
}

impl ExperimentConfig {
    /// Parses TOML text. Relative paths resolve against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.network.resolve_paths(base);
        if let Some(out) = &mut cfg.output {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if self.budget.is_empty() {
            return Err(Error::Config("no budget given".into()));
        }
        for b in &self.budget {
            match *b {
                Budget::Absolute(0) => return Err(Error::Config("budget must be positive".into())),
                Budget::Fraction(f) if !(f > 0.0 && f.is_finite()) => {
                    return Err(Error::Config(format!(
                        "budget fraction {f} must be positive"
                    )))
                }
                _ => {}
            }
        }
        if self.alpha.is_empty() {
            return Err(Error::Config("alpha list is empty".into()));
        }
        for &a in self.alpha.iter().chain(self.beta.iter()) {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::Config(format!(
                    "jump rate {a} must be finite and non-negative"
                )));
            }
        }
        if self.rrzi.k == 0 {
            return Err(Error::Config("rrzi.k must be at least 1".into()));
        }
        if let Some(r) = &self.rrzi.root {
            r.validate()?;
        }
        if self.labels != DegreeKind::Degree {
            let directed = matches!(
                self.network,
                NetworkSource::Files { directed: true, .. }
                    | NetworkSource::Lbsn { directed: true, .. }
            );
            if !directed {
                return Err(Error::Config(format!(
                    "{:?} labels need a directed file or lbsn network",
                    self.labels
                )));
            }
        }
        Ok(())
    }

    pub fn beta_for(&self, alpha: f64) -> f64 {
        self.beta.unwrap_or(alpha)
    }
}
