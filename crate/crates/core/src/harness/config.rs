//! Experiment configuration and the `key = value` settings format.
//!
//! Settings are gathered as string pairs (from a file, then from command-line
//! overrides) and resolved into an [`ExperimentConfig`] in one place, so file
//! and CLI spellings behave identically. Keys are case-insensitive and treat
//! `_` and `-` alike.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::PartitionParams;
use crate::interference::{PowerModel, SinrParams};
use crate::mwisl::{auto_margin, BoundReport, NoiseExponent};
use crate::traffic::DEFAULT_A_MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Ds,
    Gms,
    Ra,
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ds" => Ok(Self::Ds),
            "gms" => Ok(Self::Gms),
            "ra" => Ok(Self::Ra),
            _ => Err(Error::Parse(format!(
                "unknown algorithm `{s}` (expected ds, gms or ra)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ds => "ds",
            Self::Gms => "gms",
            Self::Ra => "ra",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerKind {
    Linear,
    Uniform,
}

impl FromStr for PowerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "uniform" => Ok(Self::Uniform),
            _ => Err(Error::Parse(format!(
                "unknown power model `{s}` (expected linear or uniform)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginMode {
    Auto,
    Explicit(u32),
}

impl FromStr for MarginMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Explicit)
            .map_err(|_| Error::Parse(format!("M must be `auto` or a positive integer, got `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyConfig {
    pub n_nodes: usize,
    /// Side of the square deployment area.
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub topology: TopologyConfig,
    pub sinr: SinrParams,
    pub power_kind: PowerKind,
    pub c: f64,
    pub beta: f64,
    pub power_max: f64,
    /// Transmit power of every link under the uniform model.
    pub uniform_power: f64,
    pub epsilon: f64,
    pub k: Option<u32>,
    pub margin: MarginMode,
    pub noise_exponent: NoiseExponent,
    pub algorithm: Algorithm,
    pub slots: u64,
    pub rate: f64,
    pub rates: Vec<f64>,
    pub seed: u64,
    pub seeds: u32,
    pub a_max: u64,
    /// Fraction of trailing slots used for the stability slope.
    pub stability_window: f64,
    /// Stable iff slope < this many packets per slot per link.
    pub stability_threshold: f64,
    pub audit: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::desk(PowerKind::Linear)
    }
}

impl ExperimentConfig {
    /// Desk-scale profile: 100 nodes on 80 x 80, 2000 slots.
    pub fn desk(power_kind: PowerKind) -> Self {
        Self {
            topology: TopologyConfig {
                n_nodes: 100,
                area: 80.0,
            },
            sinr: SinrParams {
                eta: 1.0,
                kappa: 3.0,
                sigma: 1.0,
                xi: 1e-4,
                r_min: 1.0,
                r_max: 5.0,
            },
            power_kind,
            c: 1.0,
            beta: 2.0,
            power_max: 25.0,
            uniform_power: 1.0,
            epsilon: default_epsilon(power_kind),
            k: None,
            margin: MarginMode::Auto,
            noise_exponent: NoiseExponent::default(),
            algorithm: Algorithm::Ds,
            slots: 2000,
            rate: 0.05,
            rates: Vec::new(),
            seed: 1,
            seeds: 3,
            a_max: DEFAULT_A_MAX,
            stability_window: 0.4,
            stability_threshold: 0.05,
            audit: false,
        }
    }

    /// Full-size profile: 500 nodes on 200 x 200, 10000 slots.
    pub fn full_scale(power_kind: PowerKind) -> Self {
        let mut cfg = Self::desk(power_kind);
        cfg.topology.n_nodes = 500;
        cfg.topology.area = 200.0;
        cfg.slots = 10_000;
        cfg
    }

    pub fn power_model(&self) -> PowerModel {
        match self.power_kind {
            PowerKind::Linear => PowerModel::Linear {
                c: self.c,
                beta: self.beta,
                p_max: self.power_max,
            },
            PowerKind::Uniform => PowerModel::Uniform {
                p: self.uniform_power,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.topology;
        if t.n_nodes == 0 || !t.n_nodes.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "node count {} must be positive and even",
                t.n_nodes
            )));
        }
        if !(t.area > 0.0 && t.area.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "area side {} must be positive",
                t.area
            )));
        }
        self.sinr.validate()?;
        self.power_model().validate(&self.sinr)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon = {} must lie in (0, 1)",
                self.epsilon
            )));
        }
        if self.slots == 0 {
            return Err(Error::InvalidParams("slots must be positive".into()));
        }
        if self.seeds == 0 {
            return Err(Error::InvalidParams("seeds must be positive".into()));
        }
        if self.a_max == 0 {
            return Err(Error::InvalidParams("a_max must be at least 1".into()));
        }
        for &r in std::iter::once(&self.rate).chain(&self.rates) {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "arrival rate {r} must be finite and >= 0"
                )));
            }
        }
        if self.rates.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParams(
                "sweep rates must be sorted ascending".into(),
            ));
        }
        if !(self.stability_window > 0.0 && self.stability_window <= 1.0) {
            return Err(Error::InvalidParams(
                "stability window must lie in (0, 1]".into(),
            ));
        }
        if let MarginMode::Explicit(m) = self.margin {
            let k = self.k.unwrap_or(default_k_over_m(self.power_kind) * m);
            PartitionParams::new(self.sinr.r_max, k, m)?;
        }
        Ok(())
    }

    /// DS with a derived margin guarantees the audit bounds; anything else
    /// is only guaranteed feasible.
    pub fn bounds_guaranteed(&self) -> bool {
        self.algorithm == Algorithm::Ds && self.margin == MarginMode::Auto
    }

    /// Resolves `K` and `M` for this configuration. The cell side is `R`.
    pub fn partition_plan(&self) -> Result<PartitionPlan> {
        let d = self.sinr.r_max;
        match self.margin {
            MarginMode::Explicit(m) => {
                let k = self.k.unwrap_or(default_k_over_m(self.power_kind) * m);
                Ok(PartitionPlan {
                    params: PartitionParams::new(d, k, m)?,
                    bound: None,
                })
            }
            MarginMode::Auto => {
                let report = auto_margin(
                    &self.sinr,
                    &self.power_model(),
                    self.epsilon,
                    self.k,
                    self.noise_exponent,
                )?;
                Ok(PartitionPlan {
                    params: PartitionParams::new(d, report.k, report.margin_m)?,
                    bound: Some(report),
                })
            }
        }
    }

    /// Builds a configuration from settings pairs applied over the profile
    /// named by `profile` and `power` (desk, linear by default).
    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let power_kind = match settings.get("power") {
            Some(v) => v.parse()?,
            None => PowerKind::Linear,
        };
        let mut cfg = match settings
            .get("profile")
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            None | Some("desk") => Self::desk(power_kind),
            Some("full") => Self::full_scale(power_kind),
            Some(other) => return Err(Error::Parse(format!("unknown profile `{other}`"))),
        };
        for (key, value) in settings.iter() {
            cfg.apply(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "profile" | "power" => {}
            "nodes" => self.topology.n_nodes = num(key, value)?,
            "area" => self.topology.area = num(key, value)?,
            "rmin" | "r-min" => self.sinr.r_min = num(key, value)?,
            "rmax" | "r-max" => self.sinr.r_max = num(key, value)?,
            "kappa" => self.sinr.kappa = num(key, value)?,
            "sigma" => self.sinr.sigma = num(key, value)?,
            "eta" => self.sinr.eta = num(key, value)?,
            "xi" => self.sinr.xi = num(key, value)?,
            "c" => self.c = num(key, value)?,
            "beta" => self.beta = num(key, value)?,
            "power-max" => self.power_max = num(key, value)?,
            "uniform-power" => self.uniform_power = num(key, value)?,
            "epsilon" => self.epsilon = num(key, value)?,
            "k" => {
                self.k = if value.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(num(key, value)?)
                }
            }
            "m" => self.margin = value.parse()?,
            "noise-exponent" => {
                self.noise_exponent = match value {
                    "kappa-beta" => NoiseExponent::KappaMinusBeta,
                    "beta-kappa" => NoiseExponent::BetaMinusKappa,
                    _ => {
                        return Err(Error::Parse(format!(
                            "noise-exponent must be kappa-beta or beta-kappa, got `{value}`"
                        )))
                    }
                }
            }
            "algo" | "algorithm" => self.algorithm = value.parse()?,
            "slots" => self.slots = num(key, value)?,
            "rate" => self.rate = num(key, value)?,
            "rates" => {
                self.rates = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| num("rates", s))
                    .collect::<Result<_>>()?
            }
            "seed" => self.seed = num(key, value)?,
            "seeds" => self.seeds = num(key, value)?,
            "a-max" => self.a_max = num(key, value)?,
            "window" => self.stability_window = num(key, value)?,
            "threshold" => self.stability_threshold = num(key, value)?,
            "audit" => self.audit = parse_bool(value)?,
            // File locations are consumed by the command-line front end.
            "topo" | "out" | "schedule" | "schedule-out" | "audit-out" | "config" => {}
            _ => return Err(Error::Parse(format!("unknown setting `{key}`"))),
        }
        Ok(())
    }
}

/// Linear power runs best at epsilon = 0.8, uniform at 0.9.
pub fn default_epsilon(kind: PowerKind) -> f64 {
    match kind {
        PowerKind::Linear => 0.8,
        PowerKind::Uniform => 0.9,
    }
}

/// `K / M` used when only `M` is given.
pub fn default_k_over_m(kind: PowerKind) -> u32 {
    match kind {
        PowerKind::Linear => 6,
        PowerKind::Uniform => 9,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionPlan {
    pub params: PartitionParams,
    /// Calculator output when `M` was derived automatically.
    pub bound: Option<BoundReport>,
}

impl PartitionPlan {
    pub fn is_auto(&self) -> bool {
        self.bound.is_some()
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Parse(format!("invalid boolean `{value}`"))),
    }
}

/// Ordered settings map with normalized keys. Later inserts override.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn normalize_key(key: &str) -> String {
        key.trim().to_ascii_lowercase().replace('_', "-")
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.map.insert(Self::normalize_key(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(&Self::normalize_key(key)).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Applies every entry of `other` on top of `self`.
    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in other.iter() {
            self.map.insert(k.to_owned(), v.to_owned());
        }
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    no + 1
                )));
            };
            if k.trim().is_empty() {
                return Err(Error::Parse(format!("line {}: empty key", no + 1)));
            }
            out.set(k, v.trim());
        }
        Ok(out)
    }
}
