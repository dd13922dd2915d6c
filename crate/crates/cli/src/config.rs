//! Run configuration: a TOML file with an `[oscillator]` section, grids,
//! output paths and tolerances. Numbers are decimals or `p/q` rationals.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use nlosc::{OscillatorSpec, Potential};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Number given as a decimal or as an exact `p/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num {
    value: f64,
    /// `(p, q)` when written as a ratio of integers.
    ratio: Option<(i64, i64)>,
}

impl Num {
    pub fn float(value: f64) -> Self {
        Self { value, ratio: None }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn ratio(self) -> Option<(i64, i64)> {
        self.ratio
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let t = text.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
            let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {text:?}"));
            }
            return Ok(Self {
                value: p as f64 / q as f64,
                ratio: Some((p, q)),
            });
        }
        let value: f64 = t.parse().map_err(|_| format!("not a number: {text:?}"))?;
        Ok(Self::float(value))
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio {
            Some((p, q)) => write!(f, "{p}/{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl std::str::FromStr for Num {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Num::parse(s)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a \"p/q\" string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Ok(Num::float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num {
                    value: v as f64,
                    ratio: Some((v, 1)),
                })
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                self.visit_i64(v as i64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                Num::parse(v).map_err(E::custom)
            }
        }

        d.deserialize_any(NumVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Pert,
    ScClosed,
    ScQuadrature,
    Oracle,
    #[default]
    All,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Pert => "pert",
            Method::ScClosed => "sc-closed",
            Method::ScQuadrature => "sc-quadrature",
            Method::Oracle => "oracle",
            Method::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    Sho,
    #[default]
    Quartic,
    Monomial,
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSection {
    #[serde(default = "one")]
    pub epsilon0: Num,
    #[serde(default)]
    pub potential: PotentialKind,
    #[serde(default = "zero")]
    pub kappa: Num,
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub alpha_sq: Option<Num>,
}

impl Default for OscillatorSection {
    fn default() -> Self {
        Self {
            epsilon0: one(),
            potential: PotentialKind::Quartic,
            kappa: zero(),
            degree: None,
            alpha_sq: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Main CSV destination; standard output when absent.
    #[serde(default)]
    pub path: Option<String>,
    /// Ladder CSV `n,e_n,lambda_at_prev,A_log` written by `spectrum`.
    #[serde(default)]
    pub ladder: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Level change under basis doubling that counts as converged.
    #[serde(default = "oracle_tol")]
    pub oracle: Num,
    /// Relative bound on the neglected tail of thermal sums.
    #[serde(default = "tail_tol")]
    pub thermal_tail: Num,
    /// Absolute tolerance of the semiclassical quadrature.
    #[serde(default = "quadrature_tol")]
    pub quadrature: Num,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            oracle: oracle_tol(),
            thermal_tail: tail_tol(),
            quadrature: quadrature_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_beta")]
    pub beta: Vec<Num>,
    #[serde(default = "default_e_grid")]
    pub e_grid: Vec<Num>,
    #[serde(default)]
    pub allow_negative_oracle: bool,
    #[serde(default)]
    pub oscillator: OscillatorSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method: Method::All,
            n_max: default_n_max(),
            beta: default_beta(),
            e_grid: default_e_grid(),
            allow_negative_oracle: false,
            oscillator: OscillatorSection::default(),
            output: OutputSection::default(),
            tolerances: Tolerances::default(),
        }
    }
}

fn one() -> Num {
    Num::float(1.0)
}

fn zero() -> Num {
    Num::float(0.0)
}

fn oracle_tol() -> Num {
    Num::float(1e-10)
}

fn tail_tol() -> Num {
    Num::float(1e-12)
}

fn quadrature_tol() -> Num {
    Num::float(1e-10)
}

fn default_n_max() -> usize {
    5
}

fn default_beta() -> Vec<Num> {
    [0.5, 1.0, 2.0].into_iter().map(Num::float).collect()
}

fn default_e_grid() -> Vec<Num> {
    [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0].into_iter().map(Num::float).collect()
}

/// Largest ladder length accepted from a configuration.
pub const N_MAX_CAP: usize = 1_000_000;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text).map_err(|message| ConfigError::Parse {
            path: path.display().to_string(),
            message,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Canonical JSON rendering, the input of [`RunConfig::hash`].
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn kappa(&self) -> f64 {
        self.oscillator.kappa.value()
    }

    /// Checks ranges and method/potential consistency.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.n_max > N_MAX_CAP {
            return bad(format!("n_max = {} exceeds {N_MAX_CAP}", self.n_max));
        }
        for b in &self.beta {
            if !(b.value() > 0.0 && b.value().is_finite()) {
                return bad(format!("beta must be positive, got {b}"));
            }
        }
        for e in &self.e_grid {
            if !e.value().is_finite() {
                return bad(format!("energy grid value {e} is not finite"));
            }
        }
        for (name, t) in [
            ("oracle", self.tolerances.oracle),
            ("thermal_tail", self.tolerances.thermal_tail),
            ("quadrature", self.tolerances.quadrature),
        ] {
            if t.value().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                return bad(format!("tolerance {name} must be positive, got {t}"));
            }
        }
        self.spec()?;
        let quartic = self.oscillator.potential == PotentialKind::Quartic
            || (self.oscillator.potential == PotentialKind::Monomial && self.oscillator.degree == Some(4));
        match self.method {
            Method::Pert | Method::ScClosed if !quartic => {
                bad(format!("method {} needs the quartic potential", self.method.label()))
            }
            Method::Oracle if self.kappa() < 0.0 && !self.allow_negative_oracle => bad(format!(
                "method oracle refuses negative kappa = {} (set allow_negative_oracle to override)",
                self.oscillator.kappa
            )),
            Method::Oracle if self.oscillator.potential == PotentialKind::Exponential => {
                bad("method oracle needs a polynomial potential".into())
            }
            _ => Ok(()),
        }
    }

    pub fn spec(&self) -> Result<OscillatorSpec, ConfigError> {
        let o = &self.oscillator;
        let kappa = o.kappa.value();
        let potential = match o.potential {
            PotentialKind::Sho => Potential::None,
            PotentialKind::Quartic => Potential::Quartic { kappa },
            PotentialKind::Monomial => Potential::Monomial {
                degree: o
                    .degree
                    .ok_or_else(|| ConfigError::Invalid("monomial potential needs a degree".into()))?,
                kappa,
            },
            PotentialKind::Exponential => Potential::Exponential {
                alpha_sq: o
                    .alpha_sq
                    .ok_or_else(|| ConfigError::Invalid("exponential potential needs alpha_sq".into()))?
                    .value(),
                kappa,
            },
        };
        OscillatorSpec::new(o.epsilon0.value(), potential).map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}
