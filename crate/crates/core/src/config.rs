//! Run configuration: defaults, a flat `key = <json>` file format, and
//! command-line overrides.
//!
//! ```text
//! # comments and blank lines are ignored
//! family = "power"
//! beta = 1.5
//! ladder = [8, 16, 32, 64]
//! ```
//!
//! Unknown keys and ill-typed values are rejected with the offending line
//! number.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::Value;

use crate::report::Format;
use crate::seqclass::{Family, SeqFamily};
use crate::theorems::HarnessConfig;
use crate::trigseries::{PhiWeight, WeightFn};
use crate::verdict::{IncrementRule, TrendRule};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: String,
    pub beta: f64,
    pub gamma: f64,
    pub rho: f64,
    pub c: f64,
    pub values: Vec<f64>,
    /// Truncation length; `None` lets each command choose.
    pub n: Option<usize>,
    pub p: f64,
    /// `None` lets each command choose.
    pub r: Option<f64>,
    pub lambda_c: f64,
    pub lambda_gamma: f64,
    pub lambda_delta: f64,
    pub phi_s: f64,
    pub s: Option<f64>,
    pub random: usize,
    pub max_len: usize,
    pub seed: u64,
    pub stability: f64,
    pub harness: HarnessConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: "power".into(),
            beta: 1.0,
            gamma: 0.0,
            rho: 0.5,
            c: 1.0,
            values: Vec::new(),
            n: None,
            p: 2.0,
            r: None,
            lambda_c: 1.0,
            lambda_gamma: 0.5,
            lambda_delta: 0.0,
            phi_s: 0.0,
            s: None,
            random: 1000,
            max_len: 64,
            seed: 1,
            stability: crate::seqclass::DEFAULT_STABILITY,
            harness: HarnessConfig::default(),
            out: None,
            format: Format::Csv,
        }
    }
}

pub const KEYS: [&str; 33] = [
    "family",
    "beta",
    "gamma",
    "rho",
    "c",
    "values",
    "n",
    "p",
    "r",
    "lambda_c",
    "lambda_gamma",
    "lambda_delta",
    "phi_s",
    "s",
    "random",
    "max_len",
    "seed",
    "stability",
    "ladder",
    "log_ladder",
    "t_steps",
    "quad_steps",
    "truncation",
    "pointwise_truncation",
    "grid_points",
    "trend_growth",
    "trend_window",
    "increment_ratio",
    "increment_window",
    "flat_band",
    "growth_factor",
    "out",
    "format",
];

/// Parsed `key -> (line, value)` pairs.
pub type Entries = BTreeMap<String, (usize, Value)>;

pub fn parse_config(text: &str) -> Result<Entries> {
    let mut out = Entries::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        let value: Value = serde_json::from_str(value.trim()).map_err(|e| Error::Config {
            line,
            message: format!("value for `{key}` is not valid JSON: {e}"),
        })?;
        if out.insert(key.to_string(), (line, value)).is_some() {
            return Err(Error::Config {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(out)
}

fn bad(line: usize, key: &str, want: &str) -> Error {
    Error::Config {
        line,
        message: format!("`{key}` must be {want}"),
    }
}

fn as_f64(line: usize, key: &str, v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(line, key, "a number"))
}

fn as_usize(line: usize, key: &str, v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(line, key, "a nonnegative integer"))
}

fn as_str<'a>(line: usize, key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(line, key, "a string"))
}

fn as_list<T>(line: usize, key: &str, v: &Value, item: impl Fn(&Value) -> Option<T>) -> Result<Vec<T>> {
    v.as_array()
        .and_then(|xs| xs.iter().map(&item).collect::<Option<Vec<T>>>())
        .ok_or_else(|| bad(line, key, "a list"))
}

impl RunConfig {
    /// Apply file entries on top of the current values.
    pub fn apply(&mut self, entries: &Entries) -> Result<()> {
        for (key, (line, v)) in entries {
            let (line, k) = (*line, key.as_str());
            match k {
                "family" => self.family = as_str(line, k, v)?.to_string(),
                "beta" => self.beta = as_f64(line, k, v)?,
                "gamma" => self.gamma = as_f64(line, k, v)?,
                "rho" => self.rho = as_f64(line, k, v)?,
                "c" => self.c = as_f64(line, k, v)?,
                "values" => self.values = as_list(line, k, v, Value::as_f64)?,
                "n" => self.n = Some(as_usize(line, k, v)?),
                "p" => self.p = as_f64(line, k, v)?,
                "r" => self.r = Some(as_f64(line, k, v)?),
                "lambda_c" => self.lambda_c = as_f64(line, k, v)?,
                "lambda_gamma" => self.lambda_gamma = as_f64(line, k, v)?,
                "lambda_delta" => self.lambda_delta = as_f64(line, k, v)?,
                "phi_s" => self.phi_s = as_f64(line, k, v)?,
                "s" => self.s = Some(as_f64(line, k, v)?),
                "random" => self.random = as_usize(line, k, v)?,
                "max_len" => self.max_len = as_usize(line, k, v)?,
                "seed" => self.seed = v.as_u64().ok_or_else(|| bad(line, k, "a nonnegative integer"))?,
                "stability" => self.stability = as_f64(line, k, v)?,
                "ladder" => self.harness.ladder = as_list(line, k, v, |x| x.as_u64().map(|x| x as usize))?,
                "log_ladder" => self.harness.log_ladder = as_list(line, k, v, |x| x.as_u64().map(|x| x as usize))?,
                "t_steps" => self.harness.t_steps = as_usize(line, k, v)?,
                "quad_steps" => self.harness.quad_steps = as_usize(line, k, v)?,
                "truncation" => self.harness.truncation = Some(as_usize(line, k, v)?),
                "pointwise_truncation" => self.harness.pointwise_truncation = as_usize(line, k, v)?,
                "grid_points" => self.harness.grid_points = Some(as_usize(line, k, v)?),
                "trend_growth" => self.harness.trend.growth = as_f64(line, k, v)?,
                "trend_window" => self.harness.trend.window = as_usize(line, k, v)?,
                "increment_ratio" => self.harness.increments.max_ratio = as_f64(line, k, v)?,
                "increment_window" => self.harness.increments.window = as_usize(line, k, v)?,
                "flat_band" => self.harness.flat_band = as_f64(line, k, v)?,
                "growth_factor" => self.harness.growth_factor = as_f64(line, k, v)?,
                "out" => self.out = Some(PathBuf::from(as_str(line, k, v)?)),
                "format" => {
                    self.format = as_str(line, k, v)?.parse().map_err(|_| bad(line, k, "\"csv\" or \"json\""))?
                }
                _ => unreachable!("keys are checked while parsing"),
            }
        }
        self.validate()
    }

    /// Reject values outside the preconditions of every command.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("rho", self.rho),
            ("c", self.c),
            ("p", self.p),
            ("lambda_c", self.lambda_c),
            ("lambda_gamma", self.lambda_gamma),
            ("lambda_delta", self.lambda_delta),
            ("phi_s", self.phi_s),
        ];
        for (name, x) in finite {
            if !x.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if self.p <= 1.0 {
            return Err(Error::param("p", format!("need p > 1, got {}", self.p)));
        }
        if let Some(r) = self.r {
            if !(r.is_finite() && r >= 1.0) {
                return Err(Error::param("r", format!("need r >= 1, got {r}")));
            }
        }
        if self.stability < 1.0 {
            return Err(Error::param("stability", "must be at least 1"));
        }
        let h = &self.harness;
        if h.t_steps < 64 {
            return Err(Error::param("t_steps", "must be at least 64"));
        }
        if h.quad_steps < 8 {
            return Err(Error::param("quad_steps", "must be at least 8"));
        }
        if h.trend.window < 2 || h.increments.window < 1 {
            return Err(Error::param("trend_window", "windows must be at least 2 (trend) and 1 (increments)"));
        }
        let ratio = h.increments.max_ratio;
        if h.trend.growth.is_nan() || h.trend.growth <= 1.0 || ratio.is_nan() || ratio <= 0.0 || ratio >= 1.0 {
            return Err(Error::param("trend_growth", "need trend_growth > 1 and 0 < increment_ratio < 1"));
        }
        if self.max_len < 1 {
            return Err(Error::param("max_len", "must be at least 1"));
        }
        Ok(())
    }

    pub fn family_spec(&self, len: usize) -> Result<SeqFamily> {
        let family = match self.family.as_str() {
            "power" => Family::Power { beta: self.beta },
            "power_log" => Family::PowerLog {
                beta: self.beta,
                gamma: self.gamma,
            },
            "block_witness" => Family::BlockWitness { rho: self.rho },
            "alternating" => Family::Alternating { c: self.c },
            "explicit" | "monotone_custom" => {
                if self.values.is_empty() {
                    return Err(Error::param("values", "explicit families need --values"));
                }
                let values = self.values.clone();
                let len = values.len();
                let family = if self.family == "explicit" {
                    Family::Explicit { values }
                } else {
                    Family::MonotoneCustom { values }
                };
                return Ok(SeqFamily::new(family, len));
            }
            other => {
                return Err(Error::param(
                    "family",
                    format!("unknown family {other:?}; expected power, power_log, block_witness, alternating, explicit or monotone_custom"),
                ))
            }
        };
        Ok(SeqFamily::new(family, len))
    }

    pub fn lambda(&self) -> Result<WeightFn> {
        WeightFn::new(self.lambda_c, self.lambda_gamma, self.lambda_delta)
    }

    pub fn phi(&self) -> Result<PhiWeight> {
        PhiWeight::new(self.phi_s)
    }

    pub fn harness(&self) -> HarnessConfig {
        let mut h = self.harness.clone();
        if let Some(n) = self.n {
            h.truncation = Some(n);
        }
        h.s = self.s.or(h.s);
        h
    }

    pub fn trend(&self) -> TrendRule {
        self.harness.trend
    }

    pub fn increments(&self) -> IncrementRule {
        self.harness.increments
    }
}
