//! Experiment configuration from flat `key = value` files and flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use padic_potts::padic::is_prime;
use padic_potts::PadicNumber;
use thiserror::Error;

use crate::literal::{parse_padic_literal, parse_rational};

pub const PRECISION_ENV: &str = "PADIC_PRECISION";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        ConfigError { field: field.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    FixedPoints,
    Classify,
    Orbit,
    JuliaPartition,
    Incidence,
    Periodic,
    Conjugacy,
    GibbsCompat,
    TiSolve,
    HmConstruct,
    CountBound,
    SmallPrime,
}

pub const EXPERIMENTS: [&str; 12] = [
    "fixed-points",
    "classify",
    "orbit",
    "julia-partition",
    "incidence",
    "periodic",
    "conjugacy",
    "gibbs-compat",
    "ti-solve",
    "hm-construct",
    "count-bound",
    "small-prime",
];

impl Experiment {
    pub fn name(self) -> &'static str {
        EXPERIMENTS[self as usize]
    }
}

impl FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        use Experiment::*;
        let all = [
            FixedPoints, Classify, Orbit, JuliaPartition, Incidence, Periodic, Conjugacy, GibbsCompat,
            TiSolve, HmConstruct, CountBound, SmallPrime,
        ];
        all.into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::new("experiment", format!("unknown experiment `{s}`; expected one of {}", EXPERIMENTS.join(", "))))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub prime: u32,
    pub theta: String,
    pub q: String,
    pub q_states: Option<usize>,
    pub precision: i64,
    pub seed: u64,
    pub max_iter: usize,
    pub out: Option<PathBuf>,
    pub x: Option<String>,
    pub word: Option<String>,
    pub form: String,
    pub m1: usize,
    pub m2: usize,
    pub m3: usize,
    pub alpha_size: usize,
    pub m: Option<u32>,
    pub length: usize,
    pub samples: usize,
    pub timing: bool,
}

pub const KEYS: [&str; 20] = [
    "experiment", "prime", "theta", "q", "q-states", "precision", "seed", "max-iter", "out", "x",
    "word", "form", "m1", "m2", "m3", "alpha-size", "m", "length", "samples", "timing",
];

/// Reads `key = value` lines; `#` starts a comment, keys may use `-` or `_`.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::new(&format!("line {}", i + 1), "expected `key = value`"));
        };
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::new(&key, format!("unknown key on line {}", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn num<T: FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, ConfigError> {
    pairs
        .get(key)
        .map(|v| v.parse::<T>().map_err(|_| ConfigError::new(key, format!("`{v}` is not a valid number"))))
        .transpose()
}

fn default_precision() -> Result<i64, ConfigError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| ConfigError::new("precision", format!("{PRECISION_ENV}=`{v}` is not an integer"))),
        Err(_) => Ok(padic_potts::DEFAULT_PRECISION),
    }
}

impl ExperimentConfig {
    /// Builds and validates a config; absent keys take their defaults.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let experiment: Experiment = pairs
            .get("experiment")
            .ok_or_else(|| ConfigError::new("experiment", "missing"))?
            .parse()?;
        let prime: u32 = num(pairs, "prime")?.unwrap_or(7);
        if !is_prime(prime as u64) {
            return Err(ConfigError::new("prime", format!("{prime} is not prime")));
        }
        let precision = match num(pairs, "precision")? {
            Some(n) => n,
            None => default_precision()?,
        };
        if !(8..=4096).contains(&precision) {
            return Err(ConfigError::new("precision", format!("{precision} is outside 8..=4096")));
        }
        let cfg = ExperimentConfig {
            experiment,
            prime,
            theta: pairs.get("theta").cloned().unwrap_or_else(|| "1+p^3".into()),
            q: pairs.get("q").cloned().unwrap_or_else(|| "p".into()),
            q_states: num(pairs, "q-states")?,
            precision,
            seed: num(pairs, "seed")?.unwrap_or(DEFAULT_SEED),
            max_iter: num(pairs, "max-iter")?.unwrap_or(50),
            out: pairs.get("out").map(PathBuf::from),
            x: pairs.get("x").cloned(),
            word: pairs.get("word").cloned(),
            form: pairs.get("form").cloned().unwrap_or_else(|| "A".into()),
            m1: num(pairs, "m1")?.unwrap_or(0),
            m2: num(pairs, "m2")?.unwrap_or(0),
            m3: num(pairs, "m3")?.unwrap_or(0),
            alpha_size: num(pairs, "alpha-size")?.unwrap_or(1),
            m: num(pairs, "m")?,
            length: num(pairs, "length")?.unwrap_or(8),
            samples: num(pairs, "samples")?.unwrap_or(1000),
            timing: num(pairs, "timing")?.unwrap_or(false),
        };
        for (field, text) in [("theta", &cfg.theta), ("q", &cfg.q)] {
            parse_rational(text, prime).map_err(|e| ConfigError::new(field, e.to_string()))?;
        }
        if let Some(x) = &cfg.x {
            parse_rational(x, prime).map_err(|e| ConfigError::new("x", e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn theta_value(&self) -> Result<PadicNumber, ConfigError> {
        parse_padic_literal(&self.theta, self.prime, self.precision).map_err(|e| ConfigError::new("theta", e.to_string()))
    }

    pub fn q_value(&self) -> Result<PadicNumber, ConfigError> {
        parse_padic_literal(&self.q, self.prime, self.precision).map_err(|e| ConfigError::new("q", e.to_string()))
    }

    /// The number of spin states: `q-states`, else `q` when it is a
    /// positive integer.
    pub fn spin_states(&self) -> Result<usize, ConfigError> {
        if let Some(n) = self.q_states {
            return Ok(n);
        }
        let q = parse_rational(&self.q, self.prime).map_err(|e| ConfigError::new("q", e.to_string()))?;
        crate::literal::as_usize(&q)
            .filter(|&n| n >= 2)
            .ok_or_else(|| ConfigError::new("q-states", "needed because q is not an integer >= 2"))
    }
}
