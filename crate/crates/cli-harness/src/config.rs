//! Experiment configuration files.
//!
//! A config is a single JSON object. Exact rationals are written as strings
//! `"p/q"`, reals as JSON numbers, and unknown keys are rejected at every level.

use std::str::FromStr;

use laakso_core::{LaaksoParams, Rational};
use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::Value;
use shortcut_metric::{EtaSchedule, DEFAULT_ETA_DENOMINATOR};

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    VerifyMetric,
    VerifyShortcuts,
    Schedule,
    BadMaps,
    Cascade,
    Collapse,
    Diamond,
    Liplight,
    Density,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::VerifyMetric,
        Experiment::VerifyShortcuts,
        Experiment::Schedule,
        Experiment::BadMaps,
        Experiment::Cascade,
        Experiment::Collapse,
        Experiment::Diamond,
        Experiment::Liplight,
        Experiment::Density,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::VerifyMetric => "verify-metric",
            Experiment::VerifyShortcuts => "verify-shortcuts",
            Experiment::Schedule => "schedule",
            Experiment::BadMaps => "bad-maps",
            Experiment::Cascade => "cascade",
            Experiment::Collapse => "collapse",
            Experiment::Diamond => "diamond",
            Experiment::Liplight => "liplight",
            Experiment::Density => "density",
        }
    }

    /// Experiments that draw random maps and therefore need a seed.
    pub fn is_randomized(&self) -> bool {
        matches!(self, Experiment::Cascade | Experiment::Collapse)
    }

    pub fn needs_graph(&self) -> bool {
        !matches!(self, Experiment::Schedule)
    }
}

/// Exact rational parsed from `"p/q"` or `"p"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rational);

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(RatStr).map_err(de::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| format!("\"{s}\" is not a rational p/q: {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Constant(u32),
    List(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(rename = "M")]
    pub m: u32,
    /// A single `N` repeated `n + 1` times, or the list `N_1, .., N_{n+1}`.
    #[serde(rename = "N")]
    pub grid: GridValue,
    pub n: usize,
}

impl Params {
    pub fn grid(&self) -> Result<Vec<u32>> {
        let grid = match &self.grid {
            GridValue::Constant(k) => vec![*k; self.n + 1],
            GridValue::List(v) => v.clone(),
        };
        if grid.len() != self.n + 1 {
            return Err(LabError::Schema(format!("params.N has {} entries, expected n + 1 = {}", grid.len(), self.n + 1)));
        }
        if let Some((i, k)) = grid.iter().enumerate().find(|(_, k)| **k < 4 || **k % 2 == 1) {
            return Err(LabError::Schema(format!("params.N[{}] = {k} must be even and at least 4", i + 1)));
        }
        if self.m < 2 {
            return Err(LabError::Schema(format!("params.M = {} must be at least 2", self.m)));
        }
        Ok(grid)
    }

    pub fn laakso(&self) -> Result<LaaksoParams> {
        LaaksoParams::new(self.m, self.grid()?).map_err(|e| LabError::Schema(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase", deny_unknown_fields)]
pub enum EtaGenerator {
    /// `eta_i = scale * i^-exponent`, rounded to multiples of `1/denominator`.
    Power {
        exponent: f64,
        #[serde(default = "one_f64")]
        scale: f64,
        #[serde(default = "default_denominator")]
        denominator: i64,
    },
    /// `eta_i = ratio^i`.
    Geometric { ratio: RatStr },
    /// `eta_i = values[k]` for `i` in `blocks[k]`, `default` elsewhere.
    Block {
        blocks: Vec<Vec<usize>>,
        values: Vec<RatStr>,
        #[serde(default)]
        default: Option<RatStr>,
    },
}

fn one_f64() -> f64 {
    1.0
}

fn default_denominator() -> i64 {
    DEFAULT_ETA_DENOMINATOR
}

#[derive(Clone, Debug, PartialEq)]
pub enum EtaInput {
    Explicit(Vec<Rational>),
    Generated(EtaGenerator),
}

impl<'de> Deserialize<'de> for EtaInput {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Array(items) => items
                .into_iter()
                .map(|v| match v {
                    Value::String(s) => parse_rational(&s),
                    other => Err(format!("eta entries must be \"p/q\" strings, got {other}")),
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(EtaInput::Explicit)
                .map_err(de::Error::custom),
            v @ Value::Object(_) => EtaGenerator::deserialize(v).map(EtaInput::Generated).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("eta must be a list of rationals or a generator object, got {other}"))),
        }
    }
}

impl EtaInput {
    pub fn schedule(&self, len: usize) -> Result<EtaSchedule> {
        let sched = match self {
            EtaInput::Explicit(values) => {
                if values.len() < len {
                    return Err(LabError::Schema(format!("eta lists {} values, depth is {len}", values.len())));
                }
                EtaSchedule::new(values.clone())
            }
            EtaInput::Generated(EtaGenerator::Power { exponent, scale, denominator }) => {
                EtaSchedule::power(*exponent, *scale, len, *denominator)
            }
            EtaInput::Generated(EtaGenerator::Geometric { ratio }) => EtaSchedule::geometric(ratio.0, len),
            EtaInput::Generated(EtaGenerator::Block { blocks, values, default }) => {
                if blocks.len() != values.len() {
                    return Err(LabError::Schema(format!("{} blocks but {} block values", blocks.len(), values.len())));
                }
                let mut out = vec![default.map_or(Rational::from_integer(1), |d| d.0); len];
                for (block, v) in blocks.iter().zip(values) {
                    for &i in block {
                        if i == 0 || i > len {
                            return Err(LabError::Schema(format!("block level {i} outside 1..={len}")));
                        }
                        out[i - 1] = v.0;
                    }
                }
                EtaSchedule::new(out)
            }
        };
        sched.map_err(|e| LabError::Schema(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlphaGenerator {
    /// `alpha_i = scale * i^-exponent`.
    Power {
        exponent: f64,
        #[serde(default = "one_f64")]
        scale: f64,
    },
    /// `alpha_i = ratio^i`.
    Geometric { ratio: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaInput {
    Explicit(Vec<f64>),
    Generated(AlphaGenerator),
}

impl<'de> Deserialize<'de> for AlphaInput {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            v @ Value::Array(_) => Vec::<f64>::deserialize(v).map(AlphaInput::Explicit).map_err(de::Error::custom),
            v @ Value::Object(_) => AlphaGenerator::deserialize(v).map(AlphaInput::Generated).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("alpha must be a list of reals or a generator object, got {other}"))),
        }
    }
}

impl AlphaInput {
    pub fn values(&self, len: usize) -> Result<Vec<f64>> {
        let vals: Vec<f64> = match self {
            AlphaInput::Explicit(v) => {
                if v.len() < len {
                    return Err(LabError::Schema(format!("alpha lists {} values, {len} needed", v.len())));
                }
                v[..len].to_vec()
            }
            AlphaInput::Generated(AlphaGenerator::Power { exponent, scale }) => {
                (1..=len).map(|i| scale * (i as f64).powf(-exponent)).collect()
            }
            AlphaInput::Generated(AlphaGenerator::Geometric { ratio }) => (1..=len).map(|i| ratio.powi(i as i32)).collect(),
        };
        if let Some(a) = vals.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(LabError::Schema(format!("alpha value {a} is not a positive real")));
        }
        Ok(vals)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative energy decrease at which the `q > 2` solver stops.
    pub solver: Option<f64>,
    /// Slack allowed in floating-point invariant comparisons.
    pub check: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub q: Option<f64>,
    #[serde(rename = "K_q")]
    pub k_q: Option<f64>,
    pub eps: Option<Vec<f64>>,
    pub alpha: Option<AlphaInput>,
    /// Level set `I`.
    #[serde(rename = "I")]
    pub levels: Option<Vec<usize>>,
    #[serde(default)]
    pub tolerance: Tolerances,
    pub max_iterations: Option<usize>,
    /// Number of random maps or pairs.
    pub samples: Option<usize>,
    pub anchors: Option<usize>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub sigma: Option<f64>,
    /// Prefix length of the `alpha` sequence for `schedule`.
    pub length: Option<usize>,
    pub per_level: Option<usize>,
    pub steps_per_doubling: Option<u32>,
    pub symmetrize: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub params: Option<Params>,
    #[serde(default)]
    pub eta: Option<EtaInput>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Output directory, relative to the output root unless absolute.
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub options: Options,
}

impl ExperimentConfig {
    /// Parses and validates a config, returning it with the raw JSON for the manifest echo.
    pub fn parse(text: &str) -> Result<(Self, Value)> {
        let raw: Value = serde_json::from_str(text).map_err(|e| LabError::Schema(format!("config is not JSON: {e}")))?;
        let cfg: ExperimentConfig = serde_json::from_value(raw.clone()).map_err(|e| LabError::Schema(e.to_string()))?;
        cfg.validate()?;
        Ok((cfg, raw))
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.is_randomized() && self.seed.is_none() {
            return Err(LabError::Schema(format!("experiment {} is randomized and needs a seed", self.experiment.name())));
        }
        if self.experiment.needs_graph() {
            self.params()?.laakso()?;
        }
        if let Some(levels) = &self.options.levels {
            if levels.is_empty() || levels.contains(&0) {
                return Err(LabError::Schema("options.I must be a nonempty list of levels >= 1".into()));
            }
        }
        if let Some(eps) = &self.options.eps {
            if eps.is_empty() || eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
                return Err(LabError::Schema("options.eps must be a nonempty list of positive reals".into()));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<&Params> {
        self.params.as_ref().ok_or_else(|| LabError::Schema(format!("experiment {} needs params", self.experiment.name())))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| LabError::Schema(format!("experiment {} needs a seed", self.experiment.name())))
    }

    /// The configured schedule for levels `1..=len`, all ones when absent.
    pub fn schedule(&self, len: usize) -> Result<EtaSchedule> {
        match &self.eta {
            None => Ok(EtaSchedule::ones(len)),
            Some(input) => input.schedule(len),
        }
    }

    pub fn check_tolerance(&self, default: f64) -> f64 {
        self.options.tolerance.check.unwrap_or(default)
    }
}

/// JSON Schema of the config format, printed by `lab schema`.
pub fn schema() -> Value {
    let rational = serde_json::json!({ "type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$" });
    let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
    serde_json::json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "ExperimentConfig",
        "type": "object",
        "additionalProperties": false,
        "required": ["experiment"],
        "properties": {
            "experiment": { "enum": names },
            "params": {
                "type": "object",
                "additionalProperties": false,
                "required": ["M", "N", "n"],
                "properties": {
                    "M": { "type": "integer", "minimum": 2 },
                    "N": {
                        "oneOf": [
                            { "type": "integer", "minimum": 4, "multipleOf": 2 },
                            { "type": "array", "items": { "type": "integer", "minimum": 4, "multipleOf": 2 } }
                        ]
                    },
                    "n": { "type": "integer", "minimum": 0 }
                }
            },
            "eta": {
                "oneOf": [
                    { "type": "array", "items": rational },
                    {
                        "type": "object",
                        "additionalProperties": false,
                        "required": ["generator", "exponent"],
                        "properties": {
                            "generator": { "const": "power" },
                            "exponent": { "type": "number" },
                            "scale": { "type": "number" },
                            "denominator": { "type": "integer", "minimum": 1 }
                        }
                    },
                    {
                        "type": "object",
                        "additionalProperties": false,
                        "required": ["generator", "ratio"],
                        "properties": { "generator": { "const": "geometric" }, "ratio": rational }
                    },
                    {
                        "type": "object",
                        "additionalProperties": false,
                        "required": ["generator", "blocks", "values"],
                        "properties": {
                            "generator": { "const": "block" },
                            "blocks": { "type": "array", "items": { "type": "array", "items": { "type": "integer", "minimum": 1 } } },
                            "values": { "type": "array", "items": rational },
                            "default": rational
                        }
                    }
                ]
            },
            "seed": { "type": "integer", "minimum": 0, "description": "required for cascade and collapse" },
            "output": { "type": "string" },
            "options": {
                "type": "object",
                "additionalProperties": false,
                "properties": {
                    "q": { "type": "number", "minimum": 2 },
                    "K_q": { "type": "number", "minimum": 1 },
                    "eps": { "type": "array", "items": { "type": "number", "exclusiveMinimum": 0 } },
                    "alpha": {
                        "oneOf": [
                            { "type": "array", "items": { "type": "number", "exclusiveMinimum": 0 } },
                            {
                                "type": "object",
                                "additionalProperties": false,
                                "required": ["generator"],
                                "properties": {
                                    "generator": { "enum": ["power", "geometric"] },
                                    "exponent": { "type": "number" },
                                    "scale": { "type": "number" },
                                    "ratio": { "type": "number" }
                                }
                            }
                        ]
                    },
                    "I": { "type": "array", "items": { "type": "integer", "minimum": 1 } },
                    "tolerance": {
                        "type": "object",
                        "additionalProperties": false,
                        "properties": { "solver": { "type": "number" }, "check": { "type": "number" } }
                    },
                    "max_iterations": { "type": "integer", "minimum": 1 },
                    "samples": { "type": "integer", "minimum": 1 },
                    "anchors": { "type": "integer", "minimum": 1 },
                    "s": { "type": "number" },
                    "p": { "type": "number" },
                    "sigma": { "type": "number" },
                    "length": { "type": "integer", "minimum": 1 },
                    "per_level": { "type": "integer", "minimum": 1 },
                    "steps_per_doubling": { "type": "integer", "minimum": 1 },
                    "symmetrize": { "type": "boolean" }
                }
            }
        }
    })
}
